"""Independent brute-force reference for the cochain calculus.

Cochains here are plain dicts ``{(out, in_1, ..., in_n): Fraction}`` and
every operation is evaluated straight from its definition by looping over
basis inputs.  Nothing is shared with the package except the final
comparison, which goes through ``to_dict``.
"""
from fractions import Fraction
from itertools import product


def to_dict(cochain):
    return {tuple(e[:-1]): Fraction(int(e[-1].numerator), int(e[-1].denominator))
            for e in cochain.entries()}


def arity(f, default):
    for key in f:
        return len(key) - 1
    return default


def evaluate(f, dim, n, vectors):
    """f(v_1, ..., v_n) for vectors given as dicts index -> coefficient."""
    out = {}
    for key, c in f.items():
        coef = c
        for slot, idx in enumerate(key[1:]):
            coef *= vectors[slot].get(idx, 0)
            if not coef:
                break
        if coef:
            out[key[0]] = out.get(key[0], 0) + coef
    return {k: v for k, v in out.items() if v}


def comp(f, nf, g, ng, i, dim):
    """(f ∘_i g)(b_1..b_{nf+ng-1}) = f(b_1..g(b_i..b_{i+ng-1})..)."""
    out = {}
    for ins in product(range(dim), repeat=nf + ng - 1):
        inner = evaluate(g, dim, ng, [{j: 1} for j in ins[i - 1:i - 1 + ng]])
        args = [{j: 1} for j in ins[: i - 1]] + [inner] + [{j: 1} for j in ins[i - 1 + ng:]]
        for k, v in evaluate(f, dim, nf, args).items():
            out[(k, *ins)] = v
    return out


def add(*terms):
    out = {}
    for sign, f in terms:
        for k, v in f.items():
            out[k] = out.get(k, 0) + sign * v
    return {k: v for k, v in out.items() if v}


def bar(f, nf, g, ng, dim):
    terms = []
    for i in range(1, nf + 1):
        terms.append(((-1) ** ((i - 1) * (ng - 1)), comp(f, nf, g, ng, i, dim)))
    return add(*terms)


def bracket(f, nf, g, ng, dim):
    sign = (-1) ** ((nf - 1) * (ng - 1))
    return add((1, bar(f, nf, g, ng, dim)), (-sign, bar(g, ng, f, nf, dim)))


def product_table(dim, mul):
    """2-cochain from mul(i, j) -> {k: coefficient}."""
    out = {}
    for i, j in product(range(dim), repeat=2):
        for k, c in mul(i, j).items():
            if c:
                out[(k, i, j)] = Fraction(c)
    return out

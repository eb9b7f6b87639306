"""Ready-made finite models: each entry bundles the algebras, bimodules,
split structures and operators of one example, with a filtration bound
for the truncated ones."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np

from .algebra import Algebra, Bimodule, LinearOp, check_associativity, dual_bimodule, semidirect_product
from .bigraded import ProtoStructure, SplitContext, check_proto_conditions, classify, decompose_structure
from .cochain import Cochain
from .scalars import ONE, rational, zeros
from .twisting import check_twist_isomorphism, twist


class UnknownEntry(KeyError):
    pass


class ParameterError(ValueError):
    pass


class InvalidEntry(ValueError):
    """A built entry does not meet its own claims (a non-bimodule, a
    non-associative algebra or a wrong classification)."""


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    id: str
    params: dict
    algebras: dict = field(default_factory=dict)
    bimodules: dict = field(default_factory=dict)
    structures: dict = field(default_factory=dict)  # name -> ProtoStructure
    operators: dict = field(default_factory=dict)  # name -> LinearOp
    safe_degree: int | None = None
    claims: dict = field(default_factory=dict)  # structure name -> expected class
    checks: tuple = ()  # (argv, expected exit code) over the emitted files


def alg_file(key):
    return f"{key}.algebra.json"


def mod_file(key):
    return f"{key}.bimodule.json"


def op_file(key):
    return f"{key}.op.json"


def _verify(identity, algebra, *, op=None, bimodule=None, op2=None, weight=None,
            safe=None, extra=(), expect=0):
    argv = ["verify", identity, "--algebra", alg_file(algebra)]
    if bimodule:
        argv += ["--bimodule", mod_file(bimodule)]
    if op:
        argv += ["--op", op_file(op)]
    if op2:
        argv += ["--op2", op_file(op2)]
    if weight is not None:
        argv += ["--weight", str(weight)]
    if safe is not None:
        argv += ["--safe-degree", str(safe)]
    return (tuple(argv) + tuple(extra), expect)


def _assoc(algebra, expect=0):
    return (("check-assoc", alg_file(algebra)), expect)


# -- base algebras -----------------------------------------------------------

def scalar_algebra() -> Algebra:
    return Algebra.from_products("Q", 1, [(0, 0, 0, 1)], basis=("1",))


def matrix_units() -> Algebra:
    """span(E12, E11) inside 2x2 matrices: e0 = E12, e1 = E11."""
    return Algebra.from_products(
        "matrix-units", 2, [(1, 1, 1, 1), (1, 0, 0, 1)], basis=("E12", "E11")
    )


def pointwise(n: int) -> Algebra:
    return Algebra.from_products(
        f"Q^{n}", n, [(i, i, i, 1) for i in range(n)], basis=tuple(f"d{i}" for i in range(n))
    )


BASES = {"Q": scalar_algebra, "matrix-units": matrix_units}


def base_algebra(name: str) -> Algebra:
    try:
        return BASES[name]()
    except KeyError:
        raise ParameterError(f"unknown base algebra {name!r}; choose from {sorted(BASES)}") from None


def truncated_polynomials(N: int, start: int = 0, var: str = "t") -> Algebra:
    """Span of t^start .. t^(N-1) in Q[t]/(t^N); t^i has degree i."""
    powers = range(start, N)
    idx = {p: k for k, p in enumerate(powers)}
    prods = [(idx[i], idx[j], idx[i + j], 1) for i in powers for j in powers if i + j < N]
    return Algebra.from_products(
        f"{var}^{start}..{var}^{N - 1}", len(idx), prods,
        basis=tuple(f"{var}^{p}" for p in powers), degrees=tuple(powers), truncation=N,
    )


def _check_range(name, value, lo, hi):
    if not lo <= value <= hi:
        raise ParameterError(f"{name}={value} outside [{lo}, {hi}]")


# -- split structures built from an algebra --------------------------------

def _structure_of(alg: Algebra) -> ProtoStructure:
    if alg.split is None:
        raise ValueError(f"{alg.name} carries no split")
    split = SplitContext(alg.split, alg.dim - alg.split)
    return decompose_structure(split, alg.structure, alg.degrees)


def doubled(alg: Algebra, q=0, Q=0, name=None) -> Algebra:
    """A ⊕ A with (a,x)(b,y) = (ab + Qxy, ay + xb + qxy)."""
    n = alg.dim
    c = alg.table
    q, Q = rational(q), rational(Q)
    arr = zeros((2 * n,) * 3)
    A, X = slice(0, n), slice(n, 2 * n)
    arr[A, A, A] = c
    arr[X, A, X] = c
    arr[X, X, A] = c
    arr[X, X, X] = q * c
    arr[A, X, X] = Q * c
    degrees = None if alg.degrees is None else tuple(alg.degrees) * 2
    basis = tuple(alg.basis) + tuple(f"{b}'" for b in alg.basis)
    return Algebra(name or f"{alg.name}(q={q},Q={Q})", Cochain(arr, exact=True), basis,
                   degrees, split=n, truncation=alg.truncation)


def regular_bimodule(alg: Algebra) -> Bimodule:
    return Bimodule.regular(alg)


# -- operators on the polynomial-type models -------------------------------

def integral_op(alg: Algebra, domain="A", codomain="A") -> LinearOp:
    """t^i -> t^(i+1)/(i+1), with t^(N-1) sent to zero by truncation."""
    degs = alg.degrees
    pos = {d: k for k, d in enumerate(degs)}
    m = zeros((alg.dim, alg.dim))
    for k, d in enumerate(degs):
        if d + 1 in pos:
            m[pos[d + 1], k] = rational(1) / (d + 1)
    return LinearOp(m, domain, codomain)


def omega_op(alg: Algebra, coeffs: dict, domain="A", codomain="M") -> LinearOp:
    """f -> ω f' with ω = Σ coeffs[p] t^p."""
    degs = alg.degrees
    pos = {d: k for k, d in enumerate(degs)}
    m = zeros((alg.dim, alg.dim))
    for k, d in enumerate(degs):
        for p, w in coeffs.items():
            target = d - 1 + p
            if d > 0 and target in pos:
                m[pos[target], k] += rational(w) * d
    return LinearOp(m, domain, codomain)


def jackson_op(alg: Algebra, s) -> LinearOp:
    """t^i -> s^i/(1 - s^i) t^i on tQ[t]/(t^N): a weight-one RB operator,
    the finite shadow of f(x) -> f(sx) + f(s²x) + ..."""
    s = rational(s)
    m = zeros((alg.dim, alg.dim))
    for k, d in enumerate(alg.degrees):
        m[k, k] = s ** d / (1 - s ** d)
    return LinearOp(m)


# -- Weyl algebra ------------------------------------------------------------

def weyl_algebra(N: int) -> Algebra:
    """Normal-ordered monomials ∂^i x^j with i + j < N; degree i + j.

    Products are rewritten with x^b ∂^c = Σ_r (-1)^r r! C(b,r) C(c,r)
    ∂^(c-r) x^(b-r) (the exhaustive form of x∂ = ∂x - 1); monomials of
    degree ≥ N are dropped.
    """
    mono = [(i, j) for i in range(N) for j in range(N) if i + j < N]
    mono.sort(key=lambda m: (m[0] + m[1], m[0]))
    pos = {m: k for k, m in enumerate(mono)}

    def mul(u, v):
        (a, b), (c, d) = mono[u], mono[v]
        out = {}
        for r in range(min(b, c) + 1):
            key = (a + c - r, b + d - r)
            if key in pos:
                coef = (-1) ** r * factorial(r) * comb(b, r) * comb(c, r)
                out[pos[key]] = out.get(pos[key], 0) + coef
        return out

    def label(m):
        i, j = m
        parts = [f"D^{i}" if i else "", f"x^{j}" if j else ""]
        return "*".join(p for p in parts if p) or "1"

    return Algebra.from_function(
        f"Weyl(N={N})", len(mono), mul, basis=tuple(label(m) for m in mono),
        degrees=tuple(i + j for i, j in mono), truncation=N,
    )


def _weyl_index(alg: Algebra):
    out = {}
    for k, lab in enumerate(alg.basis):
        i = j = 0
        for part in lab.split("*"):
            if part.startswith("D^"):
                i = int(part[2:])
            elif part.startswith("x^"):
                j = int(part[2:])
        out[(i, j)] = k
    return out


def weyl_integral(alg: Algebra, domain="M", codomain="A") -> LinearOp:
    """∂^i x^j -> ∂^i x^(j+1)/(j+1)."""
    pos = _weyl_index(alg)
    m = zeros((alg.dim, alg.dim))
    for (i, j), k in pos.items():
        if (i, j + 1) in pos:
            m[pos[i, j + 1], k] = rational(1) / (j + 1)
    return LinearOp(m, domain, codomain)


def weyl_ad_d(alg: Algebra, domain="A", codomain="M") -> LinearOp:
    """u -> [∂, u]; on ∂^i x^j this is j ∂^i x^(j-1)."""
    pos = _weyl_index(alg)
    m = zeros((alg.dim, alg.dim))
    for (i, j), k in pos.items():
        if j:
            m[pos[i, j - 1], k] = rational(j)
    return LinearOp(m, domain, codomain)


# -- entries -------------------------------------------------------------------

def _trivial_extension(base="Q", module="dual", convention="left"):
    A = base_algebra(base)
    if module == "dual":
        M = dual_bimodule(A, convention)
    elif module == "regular":
        M = regular_bimodule(A)
    else:
        raise ParameterError(f"module must be 'dual' or 'regular', got {module!r}")
    T = semidirect_product(A, M)
    return CatalogEntry(
        "trivial-extension", dict(base=base, module=module, convention=convention),
        algebras={"A": A, "T": T}, bimodules={"M": M},
        structures={"theta": _structure_of(T)}, claims={"theta": "twilled"},
        checks=(_assoc("T"),),
    )


def _q_twilled(q="1", base="Q"):
    A = base_algebra(base)
    T = doubled(A, q=q)
    # -q·id is a weight-q Rota-Baxter operator on any algebra
    R = LinearOp.identity(A.dim).scaled(-rational(q))
    return CatalogEntry(
        "q-twilled", dict(q=str(rational(q)), base=base), algebras={"A": A, "T": T},
        structures={"theta": _structure_of(T)},
        operators={"R": R, "H": R.retagged("A2", "A1")}, claims={"theta": "twilled"},
        checks=(_assoc("T"), _verify("rb", "A", op="R", weight=rational(q)),
                _verify("mc", "T", op="H")),
    )


def _quasi_trivial(Q="1", base="Q"):
    A = base_algebra(base)
    T = doubled(A, Q=Q)
    claim = "twilled" if rational(Q) == 0 else "quasi(phi1=0)"
    return CatalogEntry(
        "quasi-trivial", dict(Q=str(rational(Q)), base=base), algebras={"A": A, "T": T},
        structures={"theta": _structure_of(T)}, claims={"theta": claim},
        checks=(_assoc("T"),),
    )


def _rmatrix(convention="left", slot=1):
    from .operators import r_matrix_operator

    A = matrix_units()
    M = dual_bimodule(A, convention)
    r = LinearOp(np.array([[0, 1], [-1, 0]], dtype=object))  # E12⊗E11 - E11⊗E12
    return CatalogEntry(
        "rmatrix-2dim", dict(convention=convention, slot=int(slot)),
        algebras={"A": A, "T": semidirect_product(A, M)}, bimodules={"M": M},
        operators={"r": r, "pi": r_matrix_operator(r, int(slot))},
        checks=(_verify("grb", "A", bimodule="M", op="pi"), _verify("aybe", "A", op="r")),
    )


def _poly_integral(N=8, omega="0,1"):
    """Q[t]/(t^N) with the integral, M = A, Ω = ω d/dt.  ``omega`` lists
    the coefficients of ω in increasing powers of t."""
    N = int(N)
    _check_range("N", N, 3, 12)
    coeffs = _parse_coeffs(omega)
    A = truncated_polynomials(N)
    M = regular_bimodule(A)
    J = integral_op(A)
    safe = (N - 3) // 2
    return CatalogEntry(
        "poly-integral", dict(N=N, omega=omega),
        algebras={"A": A}, bimodules={"M": M},
        operators={"R": J, "pi": J.retagged("M", "A"), "omega": omega_op(A, coeffs),
                   "id": LinearOp.identity(A.dim)},
        safe_degree=safe,
        checks=(
            _verify("rb", "A", op="R", weight=0, safe=safe),
            _verify("rb", "A", op="id", weight=-1),
            _verify("rb", "A", op="id", weight=0, expect=1),
            _verify("grb", "A", bimodule="M", op="pi", safe=safe),
            _verify("nijenhuis-chain", "A", bimodule="M", op="pi", op2="omega", safe=safe),
        ),
    )


def _weight_q_model(N=8, q="2", s="1/2"):
    """tQ[t]/(t^N) with the weight-q operator q·(t^i -> s^i/(1-s^i) t^i),
    its doubles A⋈_q A and A⊕_{q²/4} A, and B = R + (q/2)id."""
    N = int(N)
    _check_range("N", N, 3, 12)
    q, s = rational(q), rational(s)
    if s == 0 or s == 1:
        raise ParameterError("s must avoid 0 and 1")
    A = truncated_polynomials(N, start=1)
    R = jackson_op(A, s).scaled(q)
    B = R + LinearOp.identity(A.dim).scaled(q / 2)
    Tq = doubled(A, q=q)
    TQ = doubled(A, Q=q * q / 4)
    return CatalogEntry(
        "jackson", dict(N=N, q=str(q), s=str(s)),
        algebras={"A": A, "A_q": Tq, "A_Q": TQ},
        structures={"theta_q": _structure_of(Tq), "theta_Q": _structure_of(TQ)},
        operators={"R": R, "H": R.retagged("A2", "A1"), "B": B.retagged("A2", "A1")},
        safe_degree=(N - 1) // 2,
        claims={"theta_q": "twilled", "theta_Q": "quasi(phi1=0)"},
        checks=(
            _verify("rb", "A", op="R", weight=q, safe=(N - 1) // 2),
            _verify("mc", "A_q", op="H", safe=(N - 1) // 2),
            _verify("qmc", "A_Q", op="B", safe=(N - 1) // 2),
        ),
    )


def _formal_series(N=8, k=1, z="1", base_dim=1):
    """A[[ν]] truncated at ν^N over commutative A = Q^base_dim, with the
    formal integral and Ω = z ν^k d/dν (z a scalar, hence central)."""
    N, k, n = int(N), int(k), int(base_dim)
    _check_range("N", N, 3, 12)
    _check_range("k", k, 1, N - 1)
    _check_range("base_dim", n, 1, 3)
    z = rational(z)
    dim = n * N

    def idx(b, i):
        return i * n + b

    prods = [(idx(b, i), idx(b, j), idx(b, i + j), 1)
             for b in range(n) for i in range(N) for j in range(N) if i + j < N]
    A = Algebra.from_products(
        f"Q^{n}[[nu]]/nu^{N}", dim, prods,
        basis=tuple(f"d{b}nu^{i}" for i in range(N) for b in range(n)),
        degrees=tuple(i for i in range(N) for b in range(n)), truncation=N,
    )
    J, W = zeros((dim, dim)), zeros((dim, dim))
    for b in range(n):
        for i in range(N):
            if i + 1 < N:
                J[idx(b, i + 1), idx(b, i)] = rational(1) / (i + 1)
            if i and i + k - 1 < N:
                W[idx(b, i + k - 1), idx(b, i)] = z * i
    return CatalogEntry(
        "formal-series", dict(N=N, k=k, z=str(z), base_dim=n),
        algebras={"A": A}, bimodules={"M": regular_bimodule(A)},
        operators={"pi": LinearOp(J, "M", "A"), "omega": LinearOp(W, "A", "M")},
        safe_degree=(N - 2 - k) // 2,
        checks=(_verify("nijenhuis-chain", "A", bimodule="M", op="pi", op2="omega",
                        safe=(N - 2 - k) // 2),),
    )


def reynolds_model(n: int = 3) -> Algebra:
    """Q^n ⊕ Q^n with (a,x)(b,y) = (ab, ay + xb - ab), pointwise."""
    arr = zeros((2 * n,) * 3)
    for i in range(n):
        a, x = i, n + i
        arr[a, a, a] = ONE
        arr[x, a, x] = ONE
        arr[x, x, a] = ONE
        arr[x, a, a] = -ONE
    basis = tuple(f"d{i}" for i in range(n)) + tuple(f"d{i}'" for i in range(n))
    return Algebra(f"Reynolds(Q^{n})", Cochain(arr, exact=True), basis, split=n)


def _reynolds(n=3):
    n = int(n)
    _check_range("n", n, 1, 6)
    T = reynolds_model(n)
    mean = np.full((n, n), rational(1) / n, dtype=object)
    return CatalogEntry(
        "reynolds-averaging", dict(n=n), algebras={"A": pointwise(n), "T": T},
        structures={"theta": _structure_of(T)},
        operators={"H": LinearOp(mean, "A2", "A1")},
        claims={"theta": "quasi(phi2=0)"},
        checks=(_assoc("T"), _verify("tmc", "T", op="H"), _verify("induced", "T", op="H")),
    )


def _weyl(N=8):
    N = int(N)
    _check_range("N", N, 3, 10)
    A = weyl_algebra(N)
    return CatalogEntry(
        "weyl", dict(N=N), algebras={"A": A}, bimodules={"M": regular_bimodule(A)},
        operators={"pi": weyl_integral(A), "omega": weyl_ad_d(A)},
        safe_degree=(N - 3) // 2,
        checks=(_verify("nijenhuis-chain", "A", bimodule="M", op="pi", op2="omega",
                        safe=(N - 3) // 2),),
    )


def _parse_coeffs(text) -> dict:
    if isinstance(text, dict):
        return {int(k): rational(v) for k, v in text.items()}
    vals = [v for v in str(text).split(",") if v.strip()]
    return {p: rational(v.strip()) for p, v in enumerate(vals) if rational(v.strip()) != 0}


_BUILDERS = {
    "trivial-extension": _trivial_extension,
    "q-twilled": _q_twilled,
    "quasi-trivial": _quasi_trivial,
    "rmatrix-2dim": _rmatrix,
    "poly-integral": _poly_integral,
    "jackson": _weight_q_model,
    "formal-series": _formal_series,
    "reynolds-averaging": _reynolds,
    "weyl": _weyl,
}


def ids():
    return sorted(_BUILDERS)


def describe(entry_id: str) -> str:
    fn = _BUILDERS.get(entry_id)
    if fn is None:
        raise UnknownEntry(entry_id)
    return (fn.__doc__ or "").strip().splitlines()[0] if fn.__doc__ else entry_id


def build(entry_id: str, **params) -> CatalogEntry:
    """Build an entry and validate every structure it carries."""
    try:
        fn = _BUILDERS[entry_id]
    except KeyError:
        raise UnknownEntry(f"unknown catalog id {entry_id!r}; known: {', '.join(ids())}") from None
    try:
        entry = fn(**params)
    except TypeError as exc:
        raise ParameterError(str(exc)) from None
    validate(entry)
    return entry


def validate(entry: CatalogEntry):
    for name, mod in entry.bimodules.items():
        if mod.algebra.truncation is None:
            chk = mod.check()
            if not chk:
                raise InvalidEntry(f"{entry.id}: {name} is not a bimodule (axiom {chk.witness.indices})")
    for name, alg in entry.algebras.items():
        if alg.truncation is None and not check_associativity(alg):
            raise InvalidEntry(f"{entry.id}: algebra {name} is not associative")
    for name, ps in entry.structures.items():
        if not check_proto_conditions(ps).all_hold:
            raise InvalidEntry(f"{entry.id}: structure {name} fails the proto conditions")
        claim = entry.claims.get(name)
        if claim is not None and classify(ps).value != claim:
            raise InvalidEntry(f"{entry.id}: {name} is {classify(ps).value}, expected {claim}")


@dataclass(frozen=True, eq=False)
class IsoCheck:
    map: LinearOp  # (a, x) -> (a + (q/2)x, x) on A ⊕ A
    Q: object
    holds: bool  # e^H twists A⊕_Q A into A⋈_q A and intertwines the products
    source: ProtoStructure
    target: ProtoStructure


def iso_q_to_Q(q, base: str = "Q") -> IsoCheck:
    """The map e^{q/2}: A⋈_q A -> A⊕_{q²/4} A and its verification."""
    q = rational(q)
    A = base_algebra(base)
    n = A.dim
    H = LinearOp.identity(n).scaled(q / 2).retagged("A2", "A1")
    Q = q * q / 4
    src = _structure_of(doubled(A, q=q))
    tgt = _structure_of(doubled(A, Q=Q))
    rep = twist(tgt, H)
    holds = rep.agree and rep.result == src and check_twist_isomorphism(tgt, H)
    E = np.eye(2 * n, dtype=object) * ONE
    E[:n, n:] = H.matrix
    E = np.vectorize(rational, otypes=[object])(E)
    return IsoCheck(LinearOp(E, "T", "T"), Q, bool(holds), src, tgt)

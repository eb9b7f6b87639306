"""Seeded random inputs for property checks: cochains, homogeneous
cochains, maps between summands and split structures on M2(Q)."""
from __future__ import annotations

import numpy as np

from .algebra import Algebra, LinearOp
from .bigraded import ProtoStructure, SplitContext, decompose_structure, project_bidegree
from .cochain import Cochain
from .scalars import rational, zeros
from .twisting import twist_series


def rng_from(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_matrix(rng, shape, low=-3, high=3, density=1.0) -> np.ndarray:
    vals = rng.integers(low, high + 1, size=shape)
    if density < 1.0:
        vals = vals * (rng.random(shape) < density)
    out = zeros(shape)
    for idx, v in np.ndenumerate(vals):
        out[idx] = rational(int(v))
    return out


def random_cochain(rng, dim: int, arity: int, density=0.6) -> Cochain:
    return Cochain(random_matrix(rng, (dim,) * (arity + 1), density=density), exact=True)


def random_homogeneous(rng, split: SplitContext, arity: int, k: int, l: int) -> Cochain:
    return project_bidegree(split, random_cochain(rng, split.dim, arity, density=1.0), k, l)


def random_lift_from_A2(rng, split: SplitContext, arity: int) -> Cochain:
    """A random cochain in C^arity(A2, A1), bidegree (arity+1)|0."""
    return random_homogeneous(rng, split, arity, arity + 1, 0)


def random_map(rng, split: SplitContext, domain="A2", codomain="A1") -> LinearOp:
    n = {"A1": split.dim1, "A2": split.dim2}
    return LinearOp(random_matrix(rng, (n[codomain], n[domain])), domain, codomain)


def matrix_algebra() -> Algebra:
    """M2(Q) on E11, E12, E22, E21: span(E11, E12) and span(E22, E21)
    are subalgebras, so the first two vectors split off a twilled pair."""
    units = [(0, 0), (0, 1), (1, 1), (1, 0)]
    prods = []
    for i, (a, b) in enumerate(units):
        for j, (c, d) in enumerate(units):
            if b == c:
                prods.append((i, j, units.index((a, d)), 1))
    return Algebra.from_products("M2", 4, prods, basis=("E11", "E12", "E22", "E21"), split=2)


def _invertible(rng, n, blocks=None) -> np.ndarray:
    while True:
        g = random_matrix(rng, (n, n), -2, 2)
        if blocks is not None:
            g[: blocks, blocks:] = rational(0)
            g[blocks:, : blocks] = rational(0)
        if _det(g) != 0:
            return g


def _det(m) -> object:
    """Exact determinant by fraction-free elimination on a copy."""
    a = m.copy()
    n = a.shape[0]
    det = rational(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r, col] != 0), None)
        if piv is None:
            return rational(0)
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            det = -det
        det *= a[col, col]
        for r in range(col + 1, n):
            f = a[r, col] / a[col, col]
            a[r] = a[r] - f * a[col]
    return det


def _inverse(m) -> np.ndarray:
    n = m.shape[0]
    aug = np.concatenate([m.copy(), np.eye(n, dtype=object) * rational(1)], axis=1)
    aug = np.vectorize(rational, otypes=[object])(aug)
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r, col] != 0)
        aug[[col, piv]] = aug[[piv, col]]
        aug[col] = aug[col] / aug[col, col]
        for r in range(n):
            if r != col and aug[r, col] != 0:
                aug[r] = aug[r] - aug[r, col] * aug[col]
    return aug[:, n:]


def conjugated(S: Cochain, g: np.ndarray) -> Cochain:
    """Transport a product along the basis change g: x*'y = g⁻¹(gx * gy)."""
    gi = _inverse(g)
    c = np.tensordot(gi, S.coeffs, axes=([1], [0]))
    c = np.tensordot(c, g, axes=([1], [0]))  # (o, j, i')
    c = np.tensordot(c, g, axes=([1], [0]))  # (o, i', j')
    return Cochain(np.ascontiguousarray(c), exact=True)


SPLIT22 = SplitContext(2, 2)


def random_associative_proto(seed) -> ProtoStructure:
    """M2(Q) in a random basis, split 2 + 2: associative, generically
    with all four parts nonzero."""
    rng = rng_from(seed)
    S = matrix_algebra().structure
    return decompose_structure(SPLIT22, conjugated(S, _invertible(rng, 4)))


def random_twilled(seed) -> ProtoStructure:
    """span(E11,E12) ⋈ span(E22,E21) in a random block-diagonal basis."""
    rng = rng_from(seed)
    S = matrix_algebra().structure
    return decompose_structure(SPLIT22, conjugated(S, _invertible(rng, 4, blocks=2)))


def random_quasi(seed) -> ProtoStructure:
    """A random twilled structure twisted by a map A1 -> A2: φ2 stays 0,
    φ1 becomes nonzero."""
    rng = rng_from(seed)
    ps = random_twilled(rng)
    while True:
        K = random_map(rng, SPLIT22, "A1", "A2")
        out = twist_series(ps, K)
        if not out.phi1.is_zero():
            return out


def random_proto(seed) -> ProtoStructure:
    """An arbitrary (generally non-associative) 2-cochain on 2 + 2."""
    rng = rng_from(seed)
    return decompose_structure(SPLIT22, random_cochain(rng, 4, 2, density=0.5))

"""Finite-dimensional algebras given by structure constants, bimodules,
linear maps between tagged spaces, and the bilinear-form checks.

Structure constants are stored as the 2-cochain of the multiplication:
``structure.coeffs[k, i, j]`` is the coefficient of ``e_k`` in ``e_i e_j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .cochain import Cochain, comp_i
from .scalars import ONE, as_exact, first_nonzero, frozen, identity, rational, zeros


class DimensionMismatch(ValueError):
    pass


class PairingNotSymmetric(ValueError):
    pass


@dataclass(frozen=True)
class Witness:
    """First basis tuple where an identity fails, with both sides."""

    indices: tuple
    lhs: tuple
    rhs: tuple


@dataclass(frozen=True)
class Check:
    holds: bool
    witness: Witness | None = None

    def __bool__(self):
        return self.holds


def _vec(arr) -> tuple:
    return tuple(arr.tolist())


@dataclass(frozen=True, eq=False)
class Algebra:
    """A (not necessarily associative) algebra on ``dim`` basis vectors.

    ``degrees`` is an optional filtration degree per basis vector, used by
    truncated models to restrict identity checks; ``split`` optionally
    records that the first ``split`` vectors span the first summand.
    """

    name: str
    structure: Cochain
    basis: tuple = ()
    degrees: tuple | None = None
    split: int | None = None
    truncation: int | None = None

    def __post_init__(self):
        if self.structure.arity != 2:
            raise ValueError("multiplication must be a 2-cochain")
        if not self.basis:
            object.__setattr__(self, "basis", tuple(f"e{i}" for i in range(self.dim)))
        if len(self.basis) != self.dim:
            raise ValueError(f"{len(self.basis)} basis labels for dimension {self.dim}")
        if self.degrees is not None and len(self.degrees) != self.dim:
            raise ValueError("one degree per basis vector is required")
        if self.split is not None and not 0 <= self.split <= self.dim:
            raise ValueError(f"split {self.split} out of range for dimension {self.dim}")

    @classmethod
    def from_products(cls, name, dim, products, **kw) -> "Algebra":
        """Build from ``(i, j, k, c)`` meaning ``e_i e_j`` has ``c`` on ``e_k``."""
        arr = zeros((dim, dim, dim))
        for i, j, k, c in products:
            arr[k, i, j] += rational(c)
        return cls(name, Cochain(arr, exact=True), **kw)

    @classmethod
    def from_function(cls, name, dim, mul, **kw) -> "Algebra":
        """Build from ``mul(i, j) -> {k: coefficient}`` on basis indices."""
        arr = zeros((dim, dim, dim))
        for i, j in product(range(dim), repeat=2):
            for k, c in mul(i, j).items():
                arr[k, i, j] += rational(c)
        return cls(name, Cochain(arr, exact=True), **kw)

    @property
    def dim(self) -> int:
        return self.structure.dim

    @property
    def table(self) -> np.ndarray:
        return self.structure.coeffs

    def products(self):
        return [(i, j, k, c) for k, i, j, c in self.structure.entries()]

    def mul(self, x, y) -> np.ndarray:
        return self.structure(x, y)

    def basis_vector(self, i) -> np.ndarray:
        v = zeros(self.dim)
        v[i] = ONE
        return v

    def with_structure(self, structure: Cochain, name=None) -> "Algebra":
        return Algebra(name or self.name, structure, self.basis, self.degrees,
                       self.split, self.truncation)


def associator(S: Cochain) -> Cochain:
    """(xy)z - x(yz) as a 3-cochain."""
    return comp_i(S, S, 1) - comp_i(S, S, 2)


def check_associativity(alg: Algebra, *, mask=None) -> Check:
    """Exact associativity on all basis triples (or those allowed by
    ``mask``, a boolean array over triples)."""
    left = comp_i(alg.structure, alg.structure, 1).coeffs
    right = comp_i(alg.structure, alg.structure, 2).coeffs
    d = alg.dim
    for i, j, k in product(range(d), repeat=3):
        if mask is not None and not mask[i, j, k]:
            continue
        lhs, rhs = left[:, i, j, k], right[:, i, j, k]
        if any(a != b for a, b in zip(lhs, rhs)):
            return Check(False, Witness((i, j, k), _vec(lhs), _vec(rhs)))
    return Check(True)


@dataclass(frozen=True, eq=False)
class Bimodule:
    """Bimodule ``M`` over ``algebra``.

    ``left[k, i, j]``: coefficient of ``m_k`` in ``e_i . m_j``;
    ``right[k, i, j]``: coefficient of ``m_k`` in ``m_i . e_j``.
    """

    algebra: Algebra
    left: np.ndarray
    right: np.ndarray
    basis: tuple = ()
    name: str = "M"
    degrees: tuple | None = None

    def __post_init__(self):
        left, right = as_exact(self.left), as_exact(self.right)
        n, a = left.shape[0] if left.ndim == 3 else -1, self.algebra.dim
        if left.shape != (n, a, n) or right.shape != (n, n, a):
            raise DimensionMismatch(
                f"action tables {left.shape}/{right.shape} do not fit algebra dim {a}"
            )
        object.__setattr__(self, "left", frozen(left))
        object.__setattr__(self, "right", frozen(right))
        if not self.basis:
            object.__setattr__(self, "basis", tuple(f"m{i}" for i in range(n)))

    @property
    def dim(self) -> int:
        return self.left.shape[0]

    @classmethod
    def regular(cls, alg: Algebra) -> "Bimodule":
        """``A`` acting on itself by multiplication."""
        t = alg.table
        return cls(alg, t.copy(), t.copy(), alg.basis, name=alg.name, degrees=alg.degrees)

    def check(self) -> Check:
        """The three bimodule axioms on all basis triples."""
        A, L, R = self.algebra.table, self.left, self.right
        a, n = self.algebra.dim, self.dim
        for i, j, m in product(range(a), range(a), range(n)):
            # (e_i e_j) . m_m  vs  e_i . (e_j . m_m)
            lhs = np.tensordot(L[:, :, m], A[:, i, j], axes=([1], [0]))
            rhs = np.tensordot(L[:, i, :], L[:, j, m], axes=([1], [0]))
            if any(x != y for x, y in zip(lhs, rhs)):
                return Check(False, Witness(("left", i, j, m), _vec(lhs), _vec(rhs)))
            # m_m . (e_i e_j)  vs  (m_m . e_i) . e_j
            lhs = np.tensordot(R[:, m, :], A[:, i, j], axes=([1], [0]))
            rhs = np.tensordot(R[:, :, j], R[:, m, i], axes=([1], [0]))
            if any(x != y for x, y in zip(lhs, rhs)):
                return Check(False, Witness(("right", m, i, j), _vec(lhs), _vec(rhs)))
        for i, m, j in product(range(a), range(n), range(a)):
            # (e_i . m) . e_j  vs  e_i . (m . e_j)
            lhs = np.tensordot(R[:, :, j], L[:, i, m], axes=([1], [0]))
            rhs = np.tensordot(L[:, i, :], R[:, m, j], axes=([1], [0]))
            if any(x != y for x, y in zip(lhs, rhs)):
                return Check(False, Witness(("middle", i, m, j), _vec(lhs), _vec(rhs)))
        return Check(True)


@dataclass(frozen=True, eq=False)
class LinearOp:
    """Matrix of a linear map ``domain -> codomain``; ``matrix[i, j]`` is
    the coefficient of the ``i``-th codomain vector in the image of the
    ``j``-th domain vector.  Roles are free-form tags such as ``"A2"``,
    ``"A1"``, ``"M"``, ``"A"``."""

    matrix: np.ndarray
    domain: str = "A"
    codomain: str = "A"

    def __post_init__(self):
        m = as_exact(self.matrix)
        if m.ndim != 2:
            raise ValueError("a linear map needs a 2-d matrix")
        object.__setattr__(self, "matrix", frozen(m))

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def __call__(self, v) -> np.ndarray:
        return self.matrix.dot(as_exact(v))

    def __matmul__(self, other: "LinearOp") -> "LinearOp":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot compose {self.rows}x{self.cols} after {other.rows}x{other.cols}")
        return LinearOp(self.matrix.dot(other.matrix), other.domain, self.codomain)

    def __add__(self, other: "LinearOp") -> "LinearOp":
        if self.matrix.shape != other.matrix.shape:
            raise DimensionMismatch("shape mismatch")
        return LinearOp(self.matrix + other.matrix, self.domain, self.codomain)

    def __sub__(self, other: "LinearOp") -> "LinearOp":
        return self + other.scaled(-1)

    def scaled(self, c) -> "LinearOp":
        return LinearOp(self.matrix * rational(c), self.domain, self.codomain)

    def retagged(self, domain: str, codomain: str) -> "LinearOp":
        return LinearOp(self.matrix, domain, codomain)

    def as_cochain(self) -> Cochain:
        if self.rows != self.cols:
            raise DimensionMismatch("only endomorphisms are 1-cochains on one space")
        return Cochain(self.matrix.copy(), exact=True)

    @classmethod
    def identity(cls, n: int, role: str = "A") -> "LinearOp":
        return cls(identity(n), role, role)

    @classmethod
    def zero(cls, rows: int, cols: int, domain="A", codomain="A") -> "LinearOp":
        return cls(zeros((rows, cols)), domain, codomain)

    def is_zero(self) -> bool:
        return first_nonzero(self.matrix) is None

    def __eq__(self, other):
        if not isinstance(other, LinearOp):
            return NotImplemented
        return self.matrix.shape == other.matrix.shape and all(
            a == b for a, b in zip(self.matrix.flat, other.matrix.flat)
        )

    __hash__ = None


def semidirect_product(alg: Algebra, mod: Bimodule, name: str | None = None) -> Algebra:
    """``A ⋉ M`` with (a, m)(b, n) = (ab, a.n + m.b); ``A`` comes first."""
    if mod.algebra is not alg and not (
        mod.algebra.dim == alg.dim
        and all(x == y for x, y in zip(mod.algebra.table.flat, alg.table.flat))
    ):
        raise DimensionMismatch("bimodule is over a different algebra")
    a, n = alg.dim, mod.dim
    if n == 0:
        return alg
    d = a + n
    arr = zeros((d, d, d))
    arr[:a, :a, :a] = alg.table
    arr[a:, :a, a:] = mod.left
    arr[a:, a:, :a] = mod.right
    degrees = None
    if alg.degrees is not None and mod.degrees is not None:
        degrees = tuple(alg.degrees) + tuple(mod.degrees)
    return Algebra(
        name or f"{alg.name}⋉{mod.name}",
        Cochain(arr, exact=True),
        tuple(alg.basis) + tuple(mod.basis),
        degrees,
        split=a,
        truncation=alg.truncation,
    )


def dual_bimodule(alg: Algebra, convention: str = "left") -> Bimodule:
    """The dual space ``A*`` with the adjoint actions.

    ``left``:  (a.ξ)(b) = ξ(ba),  (ξ.a)(b) = ξ(ab)
    ``right``: (a.ξ)(b) = ξ(ab),  (ξ.a)(b) = ξ(ba)

    The ``right`` assignment is a genuine bimodule only when the products
    it mixes up commute; use :meth:`Bimodule.check` before relying on it.
    """
    c = alg.table
    d = alg.dim
    left, right = zeros((d, d, d)), zeros((d, d, d))
    for b, i, j in product(range(d), repeat=3):
        # coefficient of ξ_b in e_i . ξ_j, and in ξ_j . e_i
        if convention == "left":
            left[b, i, j] = c[j, b, i]
            right[b, j, i] = c[j, i, b]
        elif convention == "right":
            left[b, i, j] = c[j, i, b]
            right[b, j, i] = c[j, b, i]
        else:
            raise ValueError(f"unknown convention {convention!r}")
    return Bimodule(alg, left, right, tuple(f"{x}*" for x in alg.basis), name=f"{alg.name}*")


def hyperbolic_pairing(n: int) -> LinearOp:
    """⟨(a, ξ), (b, η)⟩ = ξ(b) + η(a) on A ⊕ A*."""
    p = zeros((2 * n, 2 * n))
    for i in range(n):
        p[i, n + i] = ONE
        p[n + i, i] = ONE
    return LinearOp(p, "T", "T*")


def _require_symmetric(pairing: LinearOp):
    P = pairing.matrix
    if P.shape[0] != P.shape[1]:
        raise DimensionMismatch("pairing must be square")
    idx = first_nonzero(P - P.T)
    if idx is not None:
        raise PairingNotSymmetric(f"pairing is not symmetric at {idx}")


def check_invariance(alg: Algebra, pairing: LinearOp) -> Check:
    """(t1 t2 | t3) = (t1 | t2 t3) on all basis triples."""
    _require_symmetric(pairing)
    if pairing.rows != alg.dim:
        raise DimensionMismatch("pairing size differs from algebra dimension")
    c, P = alg.table, pairing.matrix
    # lhs[i,j,l] = sum_k c[k,i,j] P[k,l];  rhs[i,j,l] = sum_k P[i,k] c[k,j,l]
    lhs = np.tensordot(c, P, axes=([0], [0]))
    rhs = np.tensordot(P, c, axes=([1], [0]))
    idx = first_nonzero(lhs - rhs)
    if idx is None:
        return Check(True)
    return Check(False, Witness(idx, (lhs[idx],), (rhs[idx],)))


def check_cyclic_cocycle(phi: Cochain, pairing: LinearOp, dim1: int | None = None) -> Check:
    """φ(a,b)(c) = φ(b,c)(a) = φ(c,a)(b) for a, b, c in the first summand.

    ``phi`` is a 2-cochain on A ⊕ A*; the functional φ(a,b) is evaluated
    through ``pairing``.  ``dim1`` defaults to half the total dimension.
    """
    d = phi.dim
    n = d // 2 if dim1 is None else dim1
    if pairing.rows != d:
        raise DimensionMismatch("pairing size differs from cochain dimension")
    # val[a,b,c] = (φ(e_a, e_b) | e_c)
    val = np.tensordot(phi.coeffs, pairing.matrix, axes=([0], [0]))
    for a, b, c in product(range(n), repeat=3):
        x, y, z = val[a, b, c], val[b, c, a], val[c, a, b]
        if not (x == y == z):
            return Check(False, Witness((a, b, c), (x,), (y, z)))
    return Check(True)

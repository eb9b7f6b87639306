"""Multilinear maps on a finite-dimensional space and the Gerstenhaber calculus.

A cochain of arity ``n`` on a space of dimension ``d`` is stored as a dense
object array of shape ``(d,) * (n + 1)`` indexed ``(out, in_1, ..., in_n)``:
``f(e_{i1}, ..., e_{in}) = sum_k coeffs[k, i1, ..., in] e_k``.
"""
from __future__ import annotations

import numpy as np

from .scalars import ONE, as_exact, first_nonzero, frozen, rational, zeros


class NotAssociativeError(ValueError):
    """Raised when a structure that must satisfy {S,S}=0 does not."""


class Cochain:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs, *, exact: bool = False):
        arr = coeffs if exact else as_exact(coeffs)
        if arr.ndim < 2:
            raise ValueError("a cochain needs arity >= 1 (array rank >= 2)")
        d = arr.shape[0]
        if d < 1 or any(s != d for s in arr.shape):
            raise ValueError(f"cochain array must be a positive hypercube, got {arr.shape}")
        # exact=True hands over ownership of a fresh array
        self.coeffs = frozen(arr)

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, dim: int, arity: int) -> "Cochain":
        return cls(zeros((dim,) * (arity + 1)), exact=True)

    @classmethod
    def identity(cls, dim: int) -> "Cochain":
        arr = zeros((dim, dim))
        for i in range(dim):
            arr[i, i] = ONE
        return cls(arr, exact=True)

    @classmethod
    def from_entries(cls, dim: int, arity: int, entries) -> "Cochain":
        arr = zeros((dim,) * (arity + 1))
        for entry in entries:
            *idx, value = entry
            if len(idx) != arity + 1:
                raise ValueError(f"entry {entry!r} does not have {arity + 1} indices")
            arr[tuple(idx)] += rational(value)
        return cls(arr, exact=True)

    # -- basic data ---------------------------------------------------------
    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    @property
    def arity(self) -> int:
        return self.coeffs.ndim - 1

    @property
    def degree(self) -> int:
        """Degree in the graded Lie algebra: arity - 1."""
        return self.arity - 1

    def entries(self):
        """Sparse listing ``(out, in_1, ..., in_n, value)`` of nonzero entries."""
        return [
            (*(int(i) for i in idx), v)
            for idx, v in np.ndenumerate(self.coeffs)
            if v != 0
        ]

    def is_zero(self) -> bool:
        return not any(v != 0 for v in self.coeffs.flat)

    def first_nonzero(self):
        return first_nonzero(self.coeffs)

    def __call__(self, *vectors):
        if len(vectors) != self.arity:
            raise ValueError(f"expected {self.arity} arguments, got {len(vectors)}")
        out = self.coeffs
        for v in reversed(vectors):
            out = np.tensordot(out, as_exact(v), axes=([out.ndim - 1], [0]))
        return out

    # -- linear structure ---------------------------------------------------
    def _check_same(self, other: "Cochain"):
        if not isinstance(other, Cochain):
            return NotImplemented
        if self.coeffs.shape != other.coeffs.shape:
            raise ValueError(
                f"shape mismatch: arity {self.arity}/dim {self.dim} "
                f"vs arity {other.arity}/dim {other.dim}"
            )
        return None

    def __add__(self, other):
        if (bad := self._check_same(other)) is not None:
            return bad
        return Cochain(self.coeffs + other.coeffs, exact=True)

    def __sub__(self, other):
        if (bad := self._check_same(other)) is not None:
            return bad
        return Cochain(self.coeffs - other.coeffs, exact=True)

    def __neg__(self):
        return Cochain(-self.coeffs, exact=True)

    def __mul__(self, scalar):
        if isinstance(scalar, Cochain):
            return NotImplemented
        return Cochain(self.coeffs * rational(scalar), exact=True)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(
            all(a == b for a, b in zip(self.coeffs.flat, other.coeffs.flat))
        )

    __hash__ = None

    def __repr__(self):
        return f"Cochain(dim={self.dim}, arity={self.arity}, nnz={len(self.entries())})"


def _same_space(*cochains: Cochain):
    dims = {c.dim for c in cochains}
    if len(dims) != 1:
        raise ValueError(f"cochains live on different spaces: dims {sorted(dims)}")


def comp_i(f: Cochain, g: Cochain, i: int) -> Cochain:
    """Insert ``g`` into the ``i``-th argument of ``f`` (1-based)."""
    _same_space(f, g)
    n, m = f.arity, g.arity
    if not 1 <= i <= n:
        raise IndexError(f"insertion slot {i} out of range 1..{n}")
    t = np.tensordot(f.coeffs, g.coeffs, axes=([i], [0]))
    # g's inputs land at the tail; move them into slot i
    t = np.moveaxis(t, list(range(n, n + m)), list(range(i, i + m)))
    return Cochain(np.ascontiguousarray(t), exact=True)


def bar_comp(f: Cochain, g: Cochain) -> Cochain:
    """Signed sum of insertions, sign (-1)^((i-1)(|g|-1))."""
    _same_space(f, g)
    total = None
    for i in range(1, f.arity + 1):
        term = comp_i(f, g, i)
        if ((i - 1) * (g.arity - 1)) % 2:
            term = -term
        total = term if total is None else total + term
    return total


def bracket_sign(f: Cochain, g: Cochain) -> int:
    return -1 if ((f.arity - 1) * (g.arity - 1)) % 2 else 1


def g_bracket(f: Cochain, g: Cochain) -> Cochain:
    """Gerstenhaber bracket {f, g}."""
    fg = bar_comp(f, g)
    gf = bar_comp(g, f)
    return fg - gf if bracket_sign(f, g) == 1 else fg + gf


def is_associative_structure(S: Cochain) -> bool:
    if S.arity != 2:
        raise ValueError("an associative structure is a 2-cochain")
    return g_bracket(S, S).is_zero()


def hochschild_d(S: Cochain, f: Cochain, *, check: bool = False) -> Cochain:
    """Hochschild coboundary d_S f = {S, f}."""
    if check and not is_associative_structure(S):
        raise NotAssociativeError("{S,S} != 0; d_S is not a differential")
    return g_bracket(S, f)


def derived_bracket(S: Cochain, f: Cochain, g: Cochain) -> Cochain:
    """[f, g]_S = (-1)^(|f|-1) {{S, f}, g}."""
    out = g_bracket(g_bracket(S, f), g)
    return -out if (f.arity - 1) % 2 else out


def tribracket(phi: Cochain, f: Cochain, g: Cochain, h: Cochain) -> Cochain:
    """[f, g, h]_phi = (-1)^(|g|-1) {{{phi, f}, g}, h}."""
    out = g_bracket(g_bracket(g_bracket(phi, f), g), h)
    return -out if (g.arity - 1) % 2 else out


def cup_product(S: Cochain, f: Cochain, g: Cochain) -> Cochain:
    """f v_S g = S(f, g), arity |f| + |g|."""
    _same_space(S, f, g)
    if S.arity != 2:
        raise ValueError("cup product needs a 2-cochain")
    return comp_i(comp_i(S, g, 2), f, 1)


def compose(*maps: Cochain) -> Cochain:
    """Composition of 1-cochains, rightmost applied first."""
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = comp_i(m, out, 1)
    return out

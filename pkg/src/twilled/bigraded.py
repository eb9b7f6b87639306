"""Bookkeeping for a split space T = A1 ⊕ A2.

Basis vectors ``0..dim1-1`` span A1 and the rest span A2.  A cochain entry
``(out, in_1, ..., in_n)`` with ``p`` inputs from A2 and ``q`` from A1 has
bidegree ``p+1 | q`` when ``out`` is in A1 and ``p | q+1`` when ``out`` is
in A2.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .algebra import LinearOp
from .cochain import Cochain, g_bracket
from .scalars import rational, zeros

_ROLE_BLOCK = {"A1": 1, "A": 1, "2": 2, "1": 1, "A2": 2, "M": 2}


def role_block(role: str) -> int:
    try:
        return _ROLE_BLOCK[role]
    except KeyError:
        raise ValueError(f"role {role!r} is not A1/A/1 or A2/M/2") from None


@dataclass(frozen=True)
class SplitContext:
    dim1: int
    dim2: int

    def __post_init__(self):
        if self.dim1 < 0 or self.dim2 < 0 or self.dim1 + self.dim2 < 1:
            raise ValueError(f"invalid split {self.dim1}+{self.dim2}")

    @property
    def dim(self) -> int:
        return self.dim1 + self.dim2

    def block(self, index: int) -> int:
        return 1 if index < self.dim1 else 2

    def indices(self, block: int) -> range:
        if block == 1:
            return range(0, self.dim1)
        if block == 2:
            return range(self.dim1, self.dim)
        raise ValueError(f"block must be 1 or 2, got {block}")

    def slice(self, block: int) -> slice:
        r = self.indices(block)
        return slice(r.start, r.stop)

    def mirrored(self) -> "SplitContext":
        return SplitContext(self.dim2, self.dim1)

    def mirror_permutation(self) -> np.ndarray:
        """Index map old -> new when A2 is moved in front of A1."""
        return np.array(
            [i + self.dim2 for i in range(self.dim1)] + [j for j in range(self.dim2)],
            dtype=int,
        )

    def bidegree_grid(self, arity: int) -> tuple[np.ndarray, np.ndarray]:
        return _bidegree_grid(self.dim1, self.dim2, arity)


@lru_cache(maxsize=None)
def _bidegree_grid(n1: int, n2: int, arity: int):
    in2 = np.array([0] * n1 + [1] * n2, dtype=int)
    shape = (n1 + n2,) * (arity + 1)
    count2 = np.zeros(shape, dtype=int)
    for axis in range(1, arity + 1):
        view = [1] * (arity + 1)
        view[axis] = n1 + n2
        count2 = count2 + in2.reshape(view)
    out2 = in2.reshape([n1 + n2] + [1] * arity)
    k = count2 + 1 - out2
    l = (arity - count2) + out2
    k.flags.writeable = False
    l.flags.writeable = False
    return k, l


@dataclass(frozen=True)
class Inhomogeneous:
    """Report for a cochain mixing bidegrees: two entries of different
    bidegree."""

    first: tuple
    first_bidegree: tuple
    witness: tuple
    witness_bidegree: tuple


def lift(split: SplitContext, block_map, in_blocks, out_block: int) -> Cochain:
    """Extend a block multilinear map by zero to all of A1 ⊕ A2.

    ``block_map`` has shape ``(dim(out_block), dim(in_1), ..., dim(in_n))``.
    """
    in_blocks = tuple(in_blocks)
    for b in (*in_blocks, out_block):
        if b not in (1, 2):
            raise ValueError(f"block index {b} not in {{1, 2}}")
    arr = np.asarray(block_map, dtype=object)
    expected = tuple(len(split.indices(b)) for b in (out_block, *in_blocks))
    if arr.shape != expected:
        raise ValueError(f"block map shape {arr.shape} != expected {expected}")
    full = zeros((split.dim,) * (len(in_blocks) + 1))
    sl = tuple(split.slice(b) for b in (out_block, *in_blocks))
    full[sl] = np.vectorize(rational, otypes=[object])(arr) if arr.size else arr
    return Cochain(full, exact=True)


def lift_map(split: SplitContext, H: LinearOp) -> Cochain:
    """Lift of a linear map between the summands, direction read from the
    role tags (``A2 -> A1`` gives bidegree 2|0, ``A1 -> A2`` gives 0|2)."""
    src, dst = role_block(H.domain), role_block(H.codomain)
    if src == dst:
        raise ValueError(f"H must map between different summands, got {H.domain}->{H.codomain}")
    return lift(split, H.matrix, (src,), dst)


def bidegree_of(split: SplitContext, f: Cochain):
    """``(k, l)`` for a homogeneous cochain, ``None`` for the zero cochain,
    an :class:`Inhomogeneous` report otherwise."""
    if f.dim != split.dim:
        raise ValueError("cochain dimension does not match the split")
    k, l = split.bidegree_grid(f.arity)
    first = None
    for idx, v in np.ndenumerate(f.coeffs):
        if v == 0:
            continue
        bd = (int(k[idx]), int(l[idx]))
        if first is None:
            first = (tuple(int(i) for i in idx), bd)
        elif bd != first[1]:
            return Inhomogeneous(first[0], first[1], tuple(int(i) for i in idx), bd)
    return None if first is None else first[1]


def project_bidegree(split: SplitContext, f: Cochain, k: int, l: int) -> Cochain:
    if k + l - 1 != f.arity:
        raise ValueError(f"bidegree {k}|{l} impossible for arity {f.arity}")
    kk, ll = split.bidegree_grid(f.arity)
    mask = (kk == k) & (ll == l)
    out = zeros(f.coeffs.shape)
    out[mask] = f.coeffs[mask]
    return Cochain(out, exact=True)


def bidegrees_for_arity(n: int):
    return [(k, n + 1 - k) for k in range(0, n + 2)]


def is_homogeneous(split: SplitContext, f: Cochain, k: int, l: int) -> bool:
    bd = bidegree_of(split, f)
    return bd is None or bd == (k, l)


class StructureClass(str, Enum):
    TWILLED = "twilled"
    QUASI = "quasi(phi2=0)"
    QUASI_MIRRORED = "quasi(phi1=0)"
    PROTO = "proto"


@dataclass(frozen=True, eq=False)
class ProtoStructure:
    """The four homogeneous parts of a 2-cochain on A1 ⊕ A2.

    ``phi1``: A1⊗A1 → A2 (0|3), ``mu1`` (1|2), ``mu2`` (2|1),
    ``phi2``: A2⊗A2 → A1 (3|0).
    """

    split: SplitContext
    phi1: Cochain
    mu1: Cochain
    mu2: Cochain
    phi2: Cochain
    degrees: tuple | None = None  # optional filtration, ignored by equality

    @property
    def parts(self) -> dict:
        return {"phi1": self.phi1, "mu1": self.mu1, "mu2": self.mu2, "phi2": self.phi2}

    @property
    def total(self) -> Cochain:
        return self.phi1 + self.mu1 + self.mu2 + self.phi2

    def is_associative(self) -> bool:
        return g_bracket(self.total, self.total).is_zero()

    def mirrored(self) -> "ProtoStructure":
        """Same structure with A2 listed first (a basis permutation)."""
        perm = self.split.mirror_permutation()
        m = self.split.mirrored()
        new = {name: permute(c, perm) for name, c in self.parts.items()}
        degrees = None
        if self.degrees is not None:
            degrees = tuple(self.degrees[self.split.dim1:]) + tuple(self.degrees[: self.split.dim1])
        return ProtoStructure(m, new["phi2"], new["mu2"], new["mu1"], new["phi1"], degrees)

    def __eq__(self, other):
        if not isinstance(other, ProtoStructure):
            return NotImplemented
        return self.split == other.split and all(
            self.parts[k] == other.parts[k] for k in self.parts
        )

    __hash__ = None


def permute(f: Cochain, perm: np.ndarray) -> Cochain:
    """Relabel basis vectors: old index ``i`` becomes ``perm[i]``."""
    inv = np.argsort(perm)
    arr = f.coeffs
    for axis in range(arr.ndim):
        arr = np.take(arr, inv, axis=axis)
    return Cochain(np.ascontiguousarray(arr), exact=True)


def decompose_structure(split: SplitContext, theta: Cochain, degrees=None) -> ProtoStructure:
    if theta.arity != 2:
        raise ValueError("only 2-cochains decompose into four substructures")
    if theta.dim != split.dim:
        raise ValueError("cochain dimension does not match the split")
    return ProtoStructure(
        split,
        project_bidegree(split, theta, 0, 3),
        project_bidegree(split, theta, 1, 2),
        project_bidegree(split, theta, 2, 1),
        project_bidegree(split, theta, 3, 0),
        None if degrees is None else tuple(degrees),
    )


@dataclass(frozen=True, eq=False)
class ProtoConditions:
    residuals: dict  # name -> Cochain (3-cochains)
    associative: bool  # {theta, theta} == 0, computed directly

    NAMES = ("mu1_phi1", "mu1_sq_mu2_phi1", "mu1_mu2_phi1_phi2", "mu2_sq_mu1_phi2", "mu2_phi2")

    @property
    def flags(self) -> dict:
        return {k: v.is_zero() for k, v in self.residuals.items()}

    @property
    def all_hold(self) -> bool:
        return all(self.flags.values())

    @property
    def consistent(self) -> bool:
        return self.all_hold == self.associative


def check_proto_conditions(ps: ProtoStructure) -> ProtoConditions:
    p1, m1, m2, p2 = ps.phi1, ps.mu1, ps.mu2, ps.phi2
    half = rational("1/2")
    res = {
        "mu1_phi1": g_bracket(m1, p1),
        "mu1_sq_mu2_phi1": half * g_bracket(m1, m1) + g_bracket(m2, p1),
        "mu1_mu2_phi1_phi2": g_bracket(m1, m2) + g_bracket(p1, p2),
        "mu2_sq_mu1_phi2": half * g_bracket(m2, m2) + g_bracket(m1, p2),
        "mu2_phi2": g_bracket(m2, p2),
    }
    return ProtoConditions(res, ps.is_associative())


def classify(ps: ProtoStructure) -> StructureClass:
    z1, z2 = ps.phi1.is_zero(), ps.phi2.is_zero()
    if z1 and z2:
        return StructureClass.TWILLED
    if z2:
        return StructureClass.QUASI
    if z1:
        return StructureClass.QUASI_MIRRORED
    return StructureClass.PROTO

"""Twisting a structure on A1 ⊕ A2 by a linear map between the summands.

Three routes are provided and must agree exactly: the exponential series
of X = {-, Ĥ} (which stops after the cubic term because ĤĤ = 0), the
conjugation e^{-Ĥ} θ (e^{Ĥ} ⊗ e^{Ĥ}) expanded into eight compositions,
and the transformation rules for the four substructures.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import LinearOp
from .bigraded import (
    ProtoStructure,
    StructureClass,
    bidegree_of,
    classify,
    decompose_structure,
    lift_map,
    role_block,
)
from .cochain import Cochain, comp_i, derived_bracket, g_bracket
from .scalars import identity, rational


class TwistSelfCheckError(RuntimeError):
    """X_Ĥ^4(θ) did not vanish: the lift is not square-zero."""


HALF = rational("1/2")
SIXTH = rational("1/6")


def _lifted(ps: ProtoStructure, H: LinearOp) -> Cochain:
    src, dst = role_block(H.domain), role_block(H.codomain)
    n = {1: ps.split.dim1, 2: ps.split.dim2}
    if H.rows != n[dst] or H.cols != n[src]:
        raise ValueError(
            f"H is {H.rows}x{H.cols} but {H.domain}->{H.codomain} needs {n[dst]}x{n[src]}"
        )
    return lift_map(ps.split, H)


def twist_series(ps: ProtoStructure, H: LinearOp) -> ProtoStructure:
    Hh = _lifted(ps, H)
    theta = ps.total
    x1 = g_bracket(theta, Hh)
    x2 = g_bracket(x1, Hh)
    x3 = g_bracket(x2, Hh)
    if not g_bracket(x3, Hh).is_zero():
        raise TwistSelfCheckError("X^4(theta) != 0")
    return decompose_structure(ps.split, theta + x1 + HALF * x2 + SIXTH * x3, ps.degrees)


def twist_closed_form(ps: ProtoStructure, H: LinearOp) -> ProtoStructure:
    Hh = _lifted(ps, H)
    t = ps.total
    t_h1 = comp_i(t, Hh, 1)  # θ(Ĥ ⊗ 1)
    t_1h = comp_i(t, Hh, 2)  # θ(1 ⊗ Ĥ)
    t_hh = comp_i(t_1h, Hh, 1)  # θ(Ĥ ⊗ Ĥ)
    out = (
        t + t_1h + t_h1 - comp_i(Hh, t, 1)
        + t_hh - comp_i(Hh, t_1h, 1) - comp_i(Hh, t_h1, 1)
        - comp_i(Hh, t_hh, 1)
    )
    return decompose_structure(ps.split, out, ps.degrees)


_DECLARED = {"phi1": (0, 3), "mu1": (1, 2), "mu2": (2, 1), "phi2": (3, 0)}


def _substructure_rules(phi1, mu1, mu2, phi2, Hh):
    p1h = g_bracket(phi1, Hh)
    p1hh = g_bracket(p1h, Hh)
    return (
        phi1,
        mu1 + p1h,
        mu2 + g_bracket(mu1, Hh) + HALF * p1hh,
        phi2 + g_bracket(mu2, Hh) + HALF * derived_bracket(mu1, Hh, Hh)
        + SIXTH * g_bracket(p1hh, Hh),
    )


def twist_substructures(ps: ProtoStructure, H: LinearOp) -> ProtoStructure:
    Hh = _lifted(ps, H)
    if role_block(H.domain) == 2:
        p1, m1, m2, p2 = _substructure_rules(ps.phi1, ps.mu1, ps.mu2, ps.phi2, Hh)
    else:
        # A1 -> A2: same rules with the summands' roles exchanged
        p2, m2, m1, p1 = _substructure_rules(ps.phi2, ps.mu2, ps.mu1, ps.phi1, Hh)
    out = ProtoStructure(ps.split, p1, m1, m2, p2, ps.degrees)
    for name, part in out.parts.items():
        bd = bidegree_of(ps.split, part)
        if bd is not None and bd != _DECLARED[name]:
            raise AssertionError(f"{name} of the twisted structure has bidegree {bd}")
    return out


@dataclass(frozen=True, eq=False)
class TwistReport:
    input: ProtoStructure
    H: LinearOp
    series_result: ProtoStructure
    closed_result: ProtoStructure
    formula_result: ProtoStructure

    @property
    def agree(self) -> bool:
        return self.series_result == self.closed_result == self.formula_result

    @property
    def result(self) -> ProtoStructure:
        return self.formula_result

    @property
    def classification(self) -> StructureClass:
        return classify(self.result)

    @property
    def curvature(self) -> Cochain:
        """The part of the twisted structure landing opposite to H's target:
        φ2ᴴ for H: A2 → A1, φ1ᴴ for H: A1 → A2."""
        return self.result.phi2 if role_block(self.H.domain) == 2 else self.result.phi1


def twist(ps: ProtoStructure, H: LinearOp) -> TwistReport:
    return TwistReport(
        ps, H, twist_series(ps, H), twist_closed_form(ps, H), twist_substructures(ps, H)
    )


def exp_lift(ps: ProtoStructure, H: LinearOp) -> np.ndarray:
    """Matrix of e^Ĥ = 1 + Ĥ on the total space."""
    return identity(ps.split.dim) + _lifted(ps, H).coeffs


def check_twist_isomorphism(ps: ProtoStructure, H: LinearOp) -> bool:
    """e^H(θᴴ(s, t)) = θ(e^H s, e^H t) on all basis pairs.

    The map is applied as a plain matrix here, independently of the
    bracket machinery used to produce θᴴ.
    """
    E = exp_lift(ps, H)
    twisted = twist_series(ps, H).total.coeffs
    theta = ps.total.coeffs
    lhs = np.tensordot(E, twisted, axes=([1], [0]))
    # θ(E s, E t)[o, i, j] = Σ θ[o, p, q] E[p, i] E[q, j]
    rhs = np.tensordot(np.tensordot(theta, E, axes=([2], [0])), E, axes=([1], [0]))
    rhs = np.moveaxis(rhs, 2, 1)
    return all(a == b for a, b in zip(lhs.flat, rhs.flat))

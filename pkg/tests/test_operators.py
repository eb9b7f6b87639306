from fractions import Fraction

import numpy as np
import pytest

from twilled.algebra import Bimodule, DimensionMismatch, LinearOp, dual_bimodule
from twilled.bigraded import SplitContext, decompose_structure, lift_map
from twilled.catalog import (
    InvalidEntry,
    build,
    doubled,
    matrix_units,
    pointwise,
    scalar_algebra,
    truncated_polynomials,
)
from twilled.cochain import Cochain
from twilled.operators import (
    ClassificationError,
    PreconditionError,
    check_aybe,
    check_grb,
    check_mc,
    check_nijenhuis,
    check_qmc,
    check_rb,
    check_tmc,
    compatibility_block,
    induced_product,
    input_mask,
    make_nijenhuis,
    r_matrix_operator,
)
from twilled.sampling import SPLIT22, random_map, random_matrix, random_quasi, random_twilled
from twilled.scalars import rational
from twilled.twisting import twist_substructures

S11 = SplitContext(1, 1)


def _structure(alg):
    return decompose_structure(SplitContext(alg.split, alg.dim - alg.split), alg.structure)


def _op(rows, domain="A", codomain="A"):
    return LinearOp(np.array([[rational(x) for x in r] for r in rows], dtype=object), domain, codomain)


def test_input_mask():
    m = input_mask((0, 1, 2), 2, 1)
    assert m.shape == (3, 3) and m.sum() == 4
    assert input_mask((0, 1), 2, None) is None


# -- Rota-Baxter ----------------------------------------------------------------

@pytest.mark.parametrize("q", [0, 1, "-1/2"])
def test_rb_zero_holds(q):
    A = matrix_units()
    assert check_rb(A, LinearOp.zero(2, 2), q).holds


def test_rb_identity_needs_minus_one():
    A = matrix_units()
    I = LinearOp.identity(2)
    assert check_rb(A, I, -1).holds
    v = check_rb(A, I, 0)
    assert not v.holds
    # x y - 2 x y on the scalar algebra
    assert check_rb(scalar_algebra(), LinearOp.identity(1), 0).residual.entries() == [(0, 0, 0, -1)]


def test_rb_integral_on_safe_degrees():
    A = truncated_polynomials(8)
    J = build("poly-integral").operators["R"]
    assert check_rb(A, J, 0, safe_degree=2).holds
    # the truncated model is stable under the ideal t^N, so it even holds everywhere
    assert check_rb(A, J, 0).holds
    assert not check_rb(A, J, 1).holds


def test_rb_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        check_rb(matrix_units(), LinearOp.identity(3))


# -- generalized Rota-Baxter ----------------------------------------------------

def test_grb_zero():
    A = matrix_units()
    v = check_grb(A, dual_bimodule(A), LinearOp.zero(2, 2, "M", "A"))
    assert v.holds and v.notes["bracket_agrees"]


def test_grb_rmatrix():
    entry = build("rmatrix-2dim")
    A, M = entry.algebras["A"], entry.bimodules["M"]
    v = check_grb(A, M, entry.operators["pi"])
    assert v.holds and v.notes["bracket_agrees"]
    # the other slot gives -r̃, also a GRB
    assert check_grb(A, M, r_matrix_operator(entry.operators["r"], 2)).holds


def test_grb_right_convention_is_not_a_bimodule():
    with pytest.raises(InvalidEntry, match="not a bimodule"):
        build("rmatrix-2dim", convention="right")


def test_grb_integral_regular_module():
    entry = build("poly-integral")
    v = check_grb(entry.algebras["A"], entry.bimodules["M"], entry.operators["pi"], safe_degree=2)
    assert v.holds and v.notes["bracket_agrees"]


def test_grb_failure_residual_matches_bracket(rng):
    A = matrix_units()
    pi = LinearOp(random_matrix(rng, (2, 2)), "M", "A")
    v = check_grb(A, dual_bimodule(A), pi)
    assert v.notes["bracket_agrees"]


def test_grb_tags():
    A = matrix_units()
    with pytest.raises(PreconditionError):
        check_grb(A, dual_bimodule(A), LinearOp.zero(2, 2, "A", "M"))


# -- Maurer-Cartan family ------------------------------------------------------

def test_mc_zero_is_strong():
    ps = random_twilled(1)
    v = check_mc(ps, LinearOp.zero(2, 2, "A2", "A1"), strong=True)
    assert v.holds and set(v.parts) == {"derivation", "bracket_term"}


@pytest.mark.parametrize("q", ["1", "2", "-1/3"])
def test_mc_weight_q_rb(q):
    entry = build("q-twilled", q=q, base="matrix-units")
    v = check_mc(entry.structures["theta"], entry.operators["H"])
    assert v.holds and v.notes["bracket_agrees"]


def test_mc_from_two_grbs():
    # H = π1 - π on A ⋈ M_π, with π and π1 = the r-matrix operators from both slots
    entry = build("rmatrix-2dim")
    A, M = entry.algebras["A"], entry.bimodules["M"]
    pi = entry.operators["pi"]
    pi1 = r_matrix_operator(entry.operators["r"], 2)
    ps = decompose_structure(SplitContext(2, 2), entry.algebras["T"].structure)
    twisted = twist_substructures(ps, pi.retagged("A2", "A1"))
    H = (pi1 - pi).retagged("A2", "A1")
    assert check_mc(twisted, H).holds


def test_mc_equivalent_to_vanishing_curvature(rng):
    for _ in range(5):
        ps = random_twilled(rng)
        H = random_map(rng, SPLIT22)
        v = check_mc(ps, H)
        assert v.notes["bracket_agrees"]
        assert v.holds == twist_substructures(ps, H).phi2.is_zero()


def test_mc_requires_twilled(rng):
    with pytest.raises(ClassificationError):
        check_mc(random_quasi(rng), random_map(rng, SPLIT22))


def test_tmc_reynolds():
    entry = build("reynolds-averaging")
    ps, H = entry.structures["theta"], entry.operators["H"]
    v = check_tmc(ps, H)
    assert v.holds and v.notes["bracket_agrees"]
    assert check_tmc(ps, LinearOp.zero(3, 3, "A2", "A1")).holds


def test_tmc_random_negative_control(rng):
    ps = build("reynolds-averaging").structures["theta"]
    v = check_tmc(ps, LinearOp(random_matrix(rng, (3, 3), 1, 3), "A2", "A1"))
    assert not v.holds and v.witness is not None
    assert v.notes["bracket_agrees"]


def test_tmc_matches_twisted_class(rng):
    for _ in range(5):
        ps = random_quasi(rng)
        H = random_map(rng, SPLIT22)
        assert check_tmc(ps, H).holds == twist_substructures(ps, H).phi2.is_zero()


@pytest.mark.parametrize("h, expected", [
    ("1", []), ("-1", []), ("2", [(0, 1, 1, -3)]), ("1/2", [(0, 1, 1, Fraction(3, 4))]), ("0", [(0, 1, 1, 1)]),
])
def test_qmc_dim_one(h, expected):
    # A ⊕_Q A with Q = q²/4 = 1: the residual at (x, x) is Q - h²
    ps = _structure(doubled(scalar_algebra(), Q=1))
    v = check_qmc(ps, _op([[h]], "A2", "A1"))
    assert [(*e[:-1], Fraction(int(e[-1].numerator), int(e[-1].denominator)))
            for e in v.residual.entries()] == expected
    assert v.holds == (expected == [])


def test_qmc_jackson_model():
    entry = build("jackson")
    v = check_qmc(entry.structures["theta_Q"], entry.operators["B"], safe_degree=entry.safe_degree)
    assert v.holds and v.notes["bracket_agrees"]
    assert check_mc(entry.structures["theta_q"], entry.operators["H"], safe_degree=entry.safe_degree).holds


def test_qmc_zero():
    assert check_qmc(_structure(doubled(scalar_algebra())), _op([["0"]], "A2", "A1")).holds


def test_qmc_requires_phi1_zero():
    with pytest.raises(ClassificationError):
        check_qmc(build("reynolds-averaging").structures["theta"], LinearOp.zero(3, 3, "A2", "A1"))


# -- induced products ---------------------------------------------------------

def test_induced_double_product():
    q = rational(3)
    entry = build("q-twilled", q="3")
    ip = induced_product(entry.structures["theta"], entry.operators["H"])
    # R = -q id: R(x)y + xR(y) + qxy = -q xy
    assert ip.product.entries() == [(0, 0, 0, -q)]
    assert ip.associative.holds


def test_induced_zero_map_is_mu2(rng):
    ps = random_twilled(rng)
    ip = induced_product(ps, LinearOp.zero(2, 2, "A2", "A1"))
    assert np.array_equal(ip.product.coeffs, ps.mu2.coeffs[2:, 2:, 2:])


def test_induced_reynolds():
    entry = build("reynolds-averaging")
    ip = induced_product(entry.structures["theta"], entry.operators["H"])
    third = rational(1) / 3
    expected = np.empty((3, 3, 3), dtype=object)
    for k in range(3):
        for i in range(3):
            for j in range(3):
                # mean(f)g + f mean(g) - mean(f)mean(g)
                expected[k, i, j] = third * (k == j) + third * (k == i) - third * third
    assert np.array_equal(ip.product.coeffs, expected)
    assert ip.associative.holds


def test_induced_refuses_failed_equation(rng):
    ps = random_twilled(rng)
    H = random_map(rng, SPLIT22)
    if check_mc(ps, H).holds:
        pytest.skip("random map happened to solve the equation")
    with pytest.raises(PreconditionError):
        induced_product(ps, H)


# -- AYBE ---------------------------------------------------------------------

def test_aybe_examples():
    A = matrix_units()
    assert check_aybe(A, np.zeros((2, 2), dtype=object)).holds
    skew = build("rmatrix-2dim").operators["r"]
    v = check_aybe(A, skew)
    assert v.holds and v.notes["skew"]
    v = check_aybe(A, _op([["0", "0"], ["0", "1"]]))
    assert not v.holds and not v.notes["skew"]
    # E11⊗E11: r13r12 - r12r23 + r23r13 = E11⊗E11⊗E11
    assert v.residual.entries() == [(1, 1, 1, 1)]


# -- Nijenhuis ----------------------------------------------------------------

@pytest.mark.parametrize("c", ["0", "1", "-2", "5/3"])
def test_nijenhuis_scalar_multiples(c):
    A = matrix_units()
    assert check_nijenhuis(A, LinearOp.identity(2).scaled(rational(c))).holds


def test_nijenhuis_random_fails(rng):
    A = build("trivial-extension", base="matrix-units").algebras["T"]
    v = check_nijenhuis(A, LinearOp(random_matrix(rng, (4, 4), 1, 3)))
    assert not v.holds and v.witness is not None


def test_make_nijenhuis_polynomial_model():
    entry = build("poly-integral")
    ops = entry.operators
    out = make_nijenhuis(entry.algebras["A"], entry.bimodules["M"], ops["pi"], ops["omega"],
                         entry.safe_degree)
    assert out.holds
    assert set(out.verdicts) >= {"strong_mc", "nijenhuis", "Npi_grb", "compatible",
                                 "pencil(t=1)", "pencil(t=2)", "pencil(t=3)"}
    # N(t^i) = i/(i+1) t^(i+1)
    for i in range(7):
        col = out.N.matrix[:, i]
        assert col[i + 1] == rational(i) / (i + 1)
        assert sum(1 for x in col if x != 0) == (1 if i else 0)


def test_make_nijenhuis_zero_omega():
    entry = build("poly-integral")
    A, M = entry.algebras["A"], entry.bimodules["M"]
    out = make_nijenhuis(A, M, entry.operators["pi"], LinearOp.zero(8, 8, "A", "M"), 2)
    assert out.N.is_zero() and out.holds


def test_make_nijenhuis_rejects_bad_omega():
    entry = build("poly-integral")
    A, M = entry.algebras["A"], entry.bimodules["M"]
    with pytest.raises(PreconditionError, match="derivation"):
        make_nijenhuis(A, M, entry.operators["pi"], LinearOp.identity(8).retagged("A", "M"), 2)
    with pytest.raises(PreconditionError, match="generalized Rota-Baxter"):
        make_nijenhuis(A, M, LinearOp.identity(8).retagged("M", "A"), entry.operators["omega"], 2)


def test_make_nijenhuis_weyl_projection():
    entry = build("weyl")
    ops = entry.operators
    A = entry.algebras["A"]
    out = make_nijenhuis(A, entry.bimodules["M"], ops["pi"], ops["omega"], entry.safe_degree)
    assert out.holds
    N = out.N.matrix
    keep = [i for i, d in enumerate(A.degrees) if d <= entry.safe_degree]
    NN = N.dot(N)
    for i in keep:
        assert all(a == b for a, b in zip(NN[:, i], N[:, i]))
    # N kills pure derivative monomials D^i
    for i, label in enumerate(A.basis):
        if label.endswith("x^0"):
            assert all(x == 0 for x in N[:, i])


def test_formal_series_chain():
    entry = build("formal-series", base_dim=2, k=2, z="3")
    ops = entry.operators
    out = make_nijenhuis(entry.algebras["A"], entry.bimodules["M"], ops["pi"], ops["omega"],
                         entry.safe_degree)
    assert out.holds


def test_compatibility_block_is_bracket():
    entry = build("poly-integral")
    A, M = entry.algebras["A"], entry.bimodules["M"]
    pi = entry.operators["pi"]
    rho = LinearOp(random_matrix(np.random.default_rng(4), (8, 8)), "M", "A")
    from twilled.algebra import semidirect_product
    from twilled.bigraded import lift
    from twilled.cochain import derived_bracket
    split = SplitContext(8, 8)
    T = semidirect_product(A, M)
    assert lift(split, compatibility_block(A, M, pi, rho), (2, 2), 1) == derived_bracket(
        T.structure, lift_map(split, pi), lift_map(split, rho))

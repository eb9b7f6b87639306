import numpy as np
import pytest

from twilled.algebra import check_associativity
from twilled.bigraded import StructureClass, check_proto_conditions, classify
from twilled.catalog import (
    ParameterError,
    UnknownEntry,
    build,
    describe,
    ids,
    iso_q_to_Q,
    truncated_polynomials,
    weyl_algebra,
)
from twilled.scalars import rational

FAST = ["trivial-extension", "q-twilled", "quasi-trivial", "rmatrix-2dim", "poly-integral",
        "jackson", "reynolds-averaging"]


def test_ids_and_descriptions():
    assert set(FAST) | {"formal-series", "weyl"} == set(ids())
    for i in ids():
        assert describe(i)


@pytest.mark.parametrize("entry_id", FAST)
def test_entries_meet_their_claims(entry_id):
    entry = build(entry_id)
    for name, ps in entry.structures.items():
        assert check_proto_conditions(ps).all_hold
        if name in entry.claims:
            assert classify(ps).value == entry.claims[name]
    assert entry.checks


def test_unknown_and_bad_params():
    with pytest.raises(UnknownEntry):
        build("no-such-entry")
    with pytest.raises(ParameterError):
        build("poly-integral", N=40)
    with pytest.raises(ParameterError):
        build("poly-integral", bogus=1)
    with pytest.raises(ParameterError):
        build("jackson", s="1")
    with pytest.raises(ParameterError):
        build("trivial-extension", module="other")


def test_q_twilled_mu2_block():
    ps = build("q-twilled", q="1").structures["theta"]
    assert classify(ps) is StructureClass.TWILLED
    assert ps.mu2.entries() == [(1, 1, 1, 1)]


def test_quasi_trivial_classes():
    assert classify(build("quasi-trivial", Q="2").structures["theta"]) is StructureClass.QUASI_MIRRORED
    assert classify(build("quasi-trivial", Q="0").structures["theta"]) is StructureClass.TWILLED


def test_truncated_polynomials():
    A = truncated_polynomials(5)
    assert A.dim == 5 and A.degrees == (0, 1, 2, 3, 4)
    assert A.mul(A.basis_vector(2), A.basis_vector(3)).tolist() == [0] * 5
    assert A.mul(A.basis_vector(1), A.basis_vector(2))[3] == 1
    B = truncated_polynomials(5, start=1)
    assert B.dim == 4 and B.degrees == (1, 2, 3, 4)


def test_weyl_closes_on_normal_ordered_basis():
    A = weyl_algebra(6)
    assert A.dim == 21
    pos = {lab: k for k, lab in enumerate(A.basis)}
    # x * D = D*x - 1
    prod = A.mul(A.basis_vector(pos["x^1"]), A.basis_vector(pos["D^1"]))
    assert prod[pos["D^1*x^1"]] == 1 and prod[pos["1"]] == -1
    assert sum(1 for v in prod if v != 0) == 2
    # D * x is already normal-ordered
    prod = A.mul(A.basis_vector(pos["D^1"]), A.basis_vector(pos["x^1"]))
    assert [k for k, v in enumerate(prod) if v != 0] == [pos["D^1*x^1"]]
    # associative on triples whose total degree stays below the cutoff
    deg = np.array(A.degrees)
    mask = deg[:, None, None] + deg[None, :, None] + deg[None, None, :] < 6
    assert check_associativity(A, mask=mask)


@pytest.mark.parametrize("base", ["Q", "matrix-units"])
@pytest.mark.parametrize("q, Q", [("1", "1/4"), ("2", "1"), ("1/2", "1/16"), ("0", "0")])
def test_iso_q_to_Q(base, q, Q):
    iso = iso_q_to_Q(q, base)
    assert iso.holds
    assert iso.Q == rational(Q)
    if q == "0":
        assert iso.map == type(iso.map).identity(iso.map.rows).retagged("T", "T")


def test_iso_map_shape():
    iso = iso_q_to_Q("2")
    assert iso.map.matrix.tolist() == [[1, 1], [0, 1]]

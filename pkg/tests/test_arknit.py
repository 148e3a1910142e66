import pytest

from exactlab.arknit import (
    NotDynkin,
    ar_dot,
    classify,
    decompose,
    dynkin_quiver,
    dynkin_type,
    find_isomorphism,
    knit,
    left_almost_split_map,
    positive_root_count,
)
from exactlab.fpfun import FpFunctor, eval_dim
from exactlab.linalg import Mat
from exactlab.repcore import Quiver, Rep, direct_sum, ext_space, realize_extension

from conftest import D4_ORIENTATIONS


def test_a2_ids(a2):
    assert [m.dims for m in a2.indecs] == [(1, 1), (0, 1), (1, 0)]
    assert a2.ids == ["m0", "m1", "m2"]
    assert len(a2.ar_sequences) == 1
    c = a2.ar_sequence_starting("m1")
    assert (c.left.dims, c.middle.dims, c.right.dims) == ((0, 1), (1, 1), (1, 0))


def test_a3_ids(a3):
    assert [m.dims for m in a3.indecs] == [(1, 1, 1), (0, 1, 1), (0, 0, 1), (0, 1, 0), (1, 1, 0), (1, 0, 0)]
    assert sorted(a3.projectives) == ["m0", "m1", "m2"]
    assert sorted(a3.injectives) == ["m0", "m4", "m5"]
    assert len(a3.ar_sequences) == 3
    assert a3.tau("m3") == "m2" and a3.tau_inv("m1") == "m4"


@pytest.mark.parametrize("orientation", D4_ORIENTATIONS)
def test_d4_count(orientation):
    ar = knit(dynkin_quiver("D4", orientation))
    assert len(ar.indecs) == 12
    assert len(ar.ar_sequences) == 12 - len(ar.injectives)


@pytest.mark.parametrize("kind", ["A4", "A5", "D5", "E6"])
def test_counts_match_positive_roots(kind):
    ar = knit(dynkin_quiver(kind))
    assert len(ar.indecs) == positive_root_count(kind)
    assert ar.dynkin_type == kind


def test_non_dynkin_rejected():
    cyc = Quiver(3, [("a", 1, 2), ("b", 2, 3), ("c", 3, 1)])
    with pytest.raises(NotDynkin):
        knit(cyc)
    kron = Quiver(2, [("a", 1, 2), ("b", 1, 2)])
    with pytest.raises(NotDynkin):
        dynkin_type(kron)
    d4_tilde = Quiver(5, [("a", 1, 2), ("b", 3, 2), ("c", 4, 2), ("d", 5, 2)])
    with pytest.raises(NotDynkin):
        knit(d4_tilde)


def test_mesh_additivity_and_tau(d4):
    for s in d4.sequence_at:
        c = d4.ar_sequence_starting(s)
        assert tuple(a + b for a, b in zip(c.left.dims, c.right.dims)) == c.middle.dims
    for m in d4.ids:
        if d4.tau(m) is not None:
            assert d4.tau_inv(d4.tau(m)) == m
        if d4.tau_inv(m) is not None:
            assert d4.tau(d4.tau_inv(m)) == m


def test_defect_of_ar_sequence_is_simple(a3, d4):
    for ar in (a3, d4):
        for s in ar.sequence_at:
            F = FpFunctor(ar.ar_sequence_starting(s).mono)
            assert [eval_dim(F, ar.rep(m)) for m in ar.ids] == [int(m == s) for m in ar.ids]


def test_classify(a2, a3, iv):
    for m in a3.ids:
        mid, iso = classify(a3.rep(m), a3)
        assert mid == m and iso.is_iso()
    scaled = Rep(a2.quiver, (1, 1), [Mat.identity(1).scale(2)])
    assert classify(scaled, a2)[0] == "m0"
    X, Y = a3.rep(iv(1, 1)), a3.rep(iv(2, 2))
    c = realize_extension(ext_space(X, Y).cocycle([1]), X, Y)
    assert classify(c.middle, a3)[0] == iv(1, 2)


def test_find_isomorphism_rejects_non_iso(a3):
    assert find_isomorphism(a3.rep("m1"), a3.rep("m3")) is None


def test_decompose(d4):
    M = direct_sum([d4.rep("m3"), d4.rep("m7"), d4.rep("m3")])
    parts = decompose(d4, M)
    assert sorted(p[0] for p in parts) == ["m3", "m3", "m7"]
    total = None
    for _, inc, proj in parts:
        assert (proj @ inc).is_iso()
        e = inc @ proj
        total = e if total is None else total + e
    assert total.is_iso()


def test_left_almost_split_map(a2, a3, iv):
    assert left_almost_split_map(a2, "m1").target.dims == (1, 1)
    assert left_almost_split_map(a2, "m2").target.dims == (0, 0)
    assert left_almost_split_map(a3, iv(1, 3)).target.dims == (1, 1, 0)


def test_dot_is_stable(a3):
    dot = ar_dot(a3)
    assert dot == ar_dot(a3)
    assert dot.startswith("digraph AR {")
    assert "m3 -> m2 [style=dashed];" in dot

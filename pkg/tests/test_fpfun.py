import random

import pytest

from exactlab.exstruct import e_bot, dual_structure
from exactlab.fpfun import (
    FpFunctor,
    dual_ar,
    dual_morphism,
    dual_rep,
    evaluate,
    eval_dim,
    functor_sum,
    matlis_dual,
    simple_functor,
    support,
    transport_dual,
)
from exactlab.idealcalc import ideal_corpus, is_fp_idempotent
from exactlab.repcore import QuiverMismatch, Rep, hom_basis, identity, zero_morphism, zero_rep
from exactlab.kronsym import KRONECKER


def test_eval_ar_mono(a2, a2ids):
    S2, P1, S1 = a2ids
    F = FpFunctor(a2.ar_sequence_starting(S2).mono)
    assert [evaluate(F, a2.rep(m)).dim for m in (S2, P1, S1)] == [1, 0, 0]
    assert support(F, a2) == {S2}


def test_trivial_functors(a2):
    X = a2.rep("m0")
    assert support(FpFunctor(identity(X)), a2) == frozenset()
    Z = FpFunctor(zero_morphism(zero_rep(a2.quiver), X))
    assert all(eval_dim(Z, a2.rep(m)) == 0 for m in a2.ids)


def test_quiver_mismatch(a2):
    with pytest.raises(QuiverMismatch):
        evaluate(FpFunctor(identity(a2.rep("m0"))), Rep(KRONECKER, (1, 0)))


def test_simple_functors(a2, a2ids, a3, iv):
    S2, P1, S1 = a2ids
    assert simple_functor(a2, S2).target.dims == (1, 1)
    assert support(simple_functor(a2, S1), a2) == {S1}
    assert support(FpFunctor(hom_basis(a3.rep(iv(3, 3)), a3.rep(iv(2, 3)))[0]), a3) == {iv(3, 3)}
    F = simple_functor(a3, iv(2, 3))
    assert sorted(F.target.dims) == sorted((1, 2, 1))
    for m in a3.ids:
        for n in a3.ids:
            assert eval_dim(simple_functor(a3, m), a3.rep(n)) == int(m == n)


def test_support_additive(d4):
    ids = d4.ids
    for a in ids:
        for b in ids[::3]:
            F, G = simple_functor(d4, a), simple_functor(d4, b)
            assert support(functor_sum([F, G]), d4) == support(F, d4) | support(G, d4)


def test_monos_vanish_on_injectives(d4):
    rng = random.Random(3)
    from exactlab.suites import random_mono
    for _ in range(30):
        f = random_mono(d4, d4.rep(rng.choice(d4.ids)), rng)
        assert all(eval_dim(FpFunctor(f), d4.rep(i)) == 0 for i in d4.injectives)


def test_dual_rep(a2):
    P1 = a2.rep("m0")
    D = dual_rep(P1)
    assert D.quiver == a2.quiver.opposite()
    assert dual_rep(D) == P1
    op, ids, _ = dual_ar(a2)
    assert op[ids["m0"]].is_injective and op[ids["m0"]].is_projective
    assert op[ids["m1"]].is_injective


def test_transport_dual_composes(a3):
    op, ids, _ = dual_ar(a3)
    for x in a3.ids:
        for y in a3.ids:
            for phi in hom_basis(a3.rep(x), a3.rep(y)):
                d = transport_dual(a3, x, y, phi)
                assert d.source == op.rep(ids[y]) and d.target == op.rep(ids[x])
    f = a3.ar_sequence_starting("m2").mono
    assert dual_morphism(dual_morphism(f)) == f


def test_matlis_dispatch(a3):
    assert matlis_dual(matlis_dual(a3.rep("m3"))) == a3.rep("m3")
    E = e_bot(a3)
    assert matlis_dual(E).U == dual_structure(E).U
    op = dual_ar(a3)[0]
    assert matlis_dual(E).U == frozenset(op.ids)
    with pytest.raises(TypeError):
        matlis_dual(3)


def test_duality_preserves_fp_idempotence(a3):
    for I in ideal_corpus(a3, 20, seed=5):
        assert is_fp_idempotent(I)[0] == is_fp_idempotent(matlis_dual(I))[0]

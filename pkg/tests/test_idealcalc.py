import json
from itertools import combinations

import pytest

from exactlab.fpfun import FpFunctor, simple_functor
from exactlab.idealcalc import (
    OrdinalExpr,
    all_ideal,
    dual_ideal,
    ideal_corpus,
    ideal_from_add,
    ideal_generate,
    ideal_of_functor_vanishing,
    ideal_power,
    ideal_product,
    is_fp_idempotent,
    is_left_factoring,
    is_left_idempotent_sampled,
    is_right_factoring,
    is_right_idempotent_sampled,
    left_approximation,
    omega_subideal_report,
    maximal_fp_idempotent_subideal,
    omega_power,
    ordinal_power,
    radical_ideal,
    right_approximation,
    trace_factorize,
    verify_theorem_d,
    zero_ideal,
)
from exactlab.repcore import factor_through_left, factor_through_right, hom_basis, hom_space, identity


def all_subsets(ids):
    return [frozenset(c) for k in range(len(ids) + 1) for c in combinations(ids, k)]


def test_generate(a2, a2ids):
    S2, P1, S1 = a2ids
    assert ideal_generate(a2, []) == zero_ideal(a2)
    f = a2.ar_sequence_starting(S2).mono
    I = ideal_generate(a2, [f])
    assert I.space(S2, P1).dim == 1
    assert I.total_dim == 1
    assert ideal_generate(a2, [identity(a2.rep(P1))]) == ideal_from_add(a2, [P1])


def test_closure_under_composition(a3):
    for I in ideal_corpus(a3, 15, seed=1):
        for x in a3.ids:
            for n in a3.ids:
                for phi in I.basis_morphisms(x, n):
                    for y in a3.ids:
                        for g in hom_basis(a3.rep(n), a3.rep(y)):
                            assert I.contains(g @ phi)
                        for h in hom_basis(a3.rep(y), a3.rep(x)):
                            assert I.contains(phi @ h)


def test_from_add(a2, a2ids):
    S2, P1, S1 = a2ids
    assert ideal_from_add(a2, a2.ids) == all_ideal(a2)
    assert ideal_from_add(a2, []) == zero_ideal(a2)
    assert ideal_from_add(a2, [P1]).space(S2, S1).dim == 0


def test_radical(a2, a2ids, a3, iv):
    S2, P1, S1 = a2ids
    R = radical_ideal(a2)
    assert R.space(S2, P1).dim == 1 and R.space(P1, P1).dim == 0
    assert all(not radical_ideal(a3).contains_identity(m) for m in a3.ids)
    R2 = ideal_power(radical_ideal(a3), 2)
    assert R2.space(iv(3, 3), iv(1, 2)).dim == 0
    # the composite [3,3] -> [2,3] -> [1,3] of two irreducibles survives in rad^2
    assert R2.space(iv(3, 3), iv(1, 3)).dim == 1
    assert R2.space(iv(3, 3), iv(2, 3)).dim == 0


def test_powers(a2, a3, iv):
    assert omega_power(radical_ideal(a2)).is_zero()
    R = radical_ideal(a3)
    assert ideal_power(R, 1) == R
    I = ideal_from_add(a3, [iv(1, 3), iv(2, 3)])
    assert omega_power(I) == I
    assert ordinal_power(R, OrdinalExpr(1, 0)) == omega_power(R)
    assert ordinal_power(R, OrdinalExpr(1, 1)).is_zero()
    assert ordinal_power(R, OrdinalExpr(0, 3)) == ideal_power(R, 3)
    with pytest.raises(ValueError):
        ordinal_power(R, OrdinalExpr(0, 0))
    with pytest.raises(ValueError):
        OrdinalExpr(-1, 0)
    assert str(OrdinalExpr(2, 1)) == "w*2+1"


def test_product_order(a3, iv):
    # (J*I)(X,Y) holds composites g f with f in I and g in J
    I = ideal_generate(a3, hom_basis(a3.rep(iv(3, 3)), a3.rep(iv(2, 3))))
    J = ideal_generate(a3, hom_basis(a3.rep(iv(2, 3)), a3.rep(iv(1, 3))))
    assert ideal_product(I, J).space(iv(3, 3), iv(1, 3)).dim == 1
    assert (I * J) == ideal_product(I, J)


def test_monotone_powers(a3):
    corpus = ideal_corpus(a3, 12, seed=2)
    for I in corpus:
        for J in corpus:
            if I <= J:
                assert ideal_power(I, 2) <= ideal_power(J, 2)
                assert omega_power(I) <= omega_power(J)


def test_left_factoring(a2, a2ids):
    S2, P1, S1 = a2ids
    f = a2.ar_sequence_starting(S2).mono
    R = radical_ideal(a2)
    assert is_left_factoring(f, zero_ideal(a2))
    assert is_left_factoring(f, R)
    assert not is_left_factoring(f, R, strongly=True)
    X = a2.rep(P1)
    assert is_left_factoring(identity(X), R)
    assert is_right_factoring(a2.ar_sequence_starting(S2).epi, zero_ideal(a2))


def test_fp_idempotent(a2, a3):
    U = frozenset(["m1", "m3"])
    assert is_fp_idempotent(ideal_from_add(a3, U)) == (True, U)
    assert is_fp_idempotent(radical_ideal(a2)) == (False, None)
    assert is_fp_idempotent(omega_power(radical_ideal(a2))) == (True, frozenset())


def test_sums_of_fp_idempotents(a3):
    subsets = all_subsets(a3.ids)
    ideals = {U: ideal_from_add(a3, U) for U in subsets}
    for U in subsets[::5]:
        for V in subsets[::7]:
            S = ideals[U] + ideals[V]
            assert is_fp_idempotent(S) == (True, U | V)
    # directed intersections: along a chain the intersection is the smaller ideal
    chain = [frozenset(a3.ids[:k]) for k in range(len(a3.ids) + 1)]
    for U in chain:
        for V in chain:
            assert (ideals[U] & ideals[V]) == ideals[U & V]
            assert is_fp_idempotent(ideals[U] & ideals[V])[0]


def test_intersection_need_not_be_add_type(a3, iv):
    I = ideal_from_add(a3, [iv(2, 3)]) & ideal_from_add(a3, [iv(1, 3)])
    assert I.identity_support() == frozenset()
    # S3 -> [1,3] factors through both [2,3] and [1,3]
    assert I.space(iv(3, 3), iv(1, 3)).dim == 1
    assert not is_fp_idempotent(I)[0]


def test_idempotence_on_small_corpus(d4):
    for I in ideal_corpus(d4, 10, seed=4):
        a = is_fp_idempotent(I)[0]
        assert a == is_left_idempotent_sampled(I) == is_right_idempotent_sampled(I)


def test_trace_factorize(a2, a2ids, a3, iv):
    S2, P1, S1 = a2ids
    f = a2.ar_sequence_starting(S2).mono
    tf = trace_factorize(f, ideal_from_add(a2, [P1]))
    assert (tf.c_prime.dims, tf.c_second.dims) == ((0, 1), (1, 1))
    assert tf.starts_ok and tf.ends_ok
    assert tf.mono @ tf.middle @ tf.epi == f
    I = ideal_from_add(a3, [iv(1, 3)])
    a = hom_basis(a3.rep(iv(2, 3)), a3.rep(iv(1, 3)))[0]
    b = hom_basis(a3.rep(iv(1, 3)), a3.rep(iv(1, 2)))[0]
    tf = trace_factorize(b @ a, I)
    assert (tf.c_prime.dims, tf.c_second.dims) == ((0, 1, 1), (1, 1, 0))
    assert tf.mono @ tf.middle @ tf.epi == b @ a


def test_approximations(a2, a2ids):
    S2, P1, S1 = a2ids
    psi = left_approximation(zero_ideal(a2), S2)
    assert psi.target.total_dim == 0
    psi = left_approximation(radical_ideal(a2), S2)
    assert psi.target.dims == (1, 1) and psi.is_mono()
    for I in (all_ideal(a2), radical_ideal(a2)):
        for x in a2.ids:
            psi = left_approximation(I, x)
            rho = right_approximation(I, x)
            for y in a2.ids:
                for phi in I.morphisms(a2.rep(x), a2.rep(y)):
                    assert factor_through_left(phi, psi) is not None
                for phi in I.morphisms(a2.rep(y), a2.rep(x)):
                    assert factor_through_right(phi, rho) is not None
    assert right_approximation(radical_ideal(a2), S1).source.dims == (1, 1)


def test_functor_vanishing(a2, a2ids, a3, iv):
    S2, P1, S1 = a2ids
    I = ideal_of_functor_vanishing(a2, FpFunctor(identity(a2.rep(P1))))
    assert I == all_ideal(a2)
    I = ideal_of_functor_vanishing(a2, simple_functor(a2, S2))
    assert [I.contains_identity(m) for m in (S2, P1, S1)] == [False, True, True]
    I = ideal_of_functor_vanishing(a3, simple_functor(a3, iv(2, 2)))
    assert I.identity_support() == frozenset(a3.ids) - {iv(2, 2)}


def test_omega_recovery_examples(a2, a3, iv):
    rep = verify_theorem_d(all_ideal(a3))
    assert rep.passed and rep.fmax_support == []
    rep = verify_theorem_d(zero_ideal(a2))
    assert rep.passed and rep.omega_dim == 0 and len(rep.fmax_support) == 3
    assert verify_theorem_d(ideal_from_add(a3, [iv(1, 3)])).passed
    with pytest.raises(ValueError):
        verify_theorem_d(radical_ideal(a3))


def test_omega_vs_maximal_subideal(a3):
    rep = omega_subideal_report(radical_ideal(a3))
    assert rep.omega_equals_maximal and rep.omega_equals_zero and rep.omega_inside_maximal
    for I in ideal_corpus(a3, 25, seed=7):
        W, J = omega_power(I), maximal_fp_idempotent_subideal(I)
        assert W <= J <= I
        assert W == J


def test_dual_ideal_involution(a3):
    for I in ideal_corpus(a3, 10, seed=8):
        assert dual_ideal(dual_ideal(I)) == I


def test_json_is_deterministic(a3):
    I = radical_ideal(a3)
    assert I.to_json() == radical_ideal(a3).to_json()
    data = json.loads(I.to_json())
    assert "pair:(m1,m0)" in data


def test_corpus_is_reproducible(a3):
    assert [I.key() for I in ideal_corpus(a3, 10)] == [I.key() for I in ideal_corpus(a3, 10)]


def test_hom_space_cached(a3):
    assert hom_space(a3.rep("m0"), a3.rep("m0")) is hom_space(a3.rep("m0"), a3.rep("m0"))

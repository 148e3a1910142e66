import random

import pytest

from exactlab.exstruct import (
    almost_e_monic_by_poset,
    almost_e_monic_by_pushouts,
    check_relative_ar_formula,
    closed_set_compose,
    closed_set_decompose,
    dual_structure,
    e_bot,
    e_of_module,
    e_top,
    enumerate_all,
    generate,
    in_e_of_module,
    injectivity_ideal,
    is_almost_e_epic,
    is_almost_e_monic,
    is_e_mono,
    is_exact_in,
    is_maximal,
    lattice_ops,
    oracle_enumerate,
    projectivity_ideal,
    projectivity_ideal_by_tau,
    rel_ext,
    single_generator,
    structure_from_U,
    tau_closed,
    tau_inv_closed,
)
from exactlab.fpfun import dual_morphism
from exactlab.idealcalc import all_ideal, ideal_from_add, is_fp_idempotent, is_left_factoring
from exactlab.repcore import (
    Conflation,
    MorphismRep,
    ext_space,
    identity,
    realize_extension,
    zero_morphism,
    zero_rep,
)


def test_top_and_bottom(a2, a2ids):
    S2, P1, S1 = a2ids
    assert e_top(a2).U == {S1, P1}
    assert e_bot(a2).U == {S1, P1, S2}
    c = a2.ar_sequence_starting(S2)
    assert is_exact_in(e_top(a2), c)
    assert not is_exact_in(e_bot(a2), c)


def test_structure_must_contain_injectives(a3):
    with pytest.raises(ValueError):
        structure_from_U(a3, ["m1"])


def test_generate(a3, iv):
    assert generate(a3, []) == e_bot(a3)
    E = generate(a3, [a3.ar_sequence_starting(iv(3, 3))])
    assert E.U == frozenset(a3.ids) - {iv(3, 3)}
    everything = generate(a3, [a3.ar_sequence_starting(s) for s in a3.sequence_at])
    assert everything == e_top(a3)
    with pytest.raises(TypeError):
        generate(a3, [identity(a3.rep("m0"))])


def test_exactness_examples(a3, iv):
    E = generate(a3, [a3.ar_sequence_starting(iv(3, 3))])
    assert not is_exact_in(E, a3.ar_sequence_starting(iv(2, 2)))
    X = a3.rep("m3")
    split = realize_extension(ext_space(X, X).cocycle([]), X, X)
    for F in enumerate_all(a3):
        assert is_exact_in(F, split)


def test_exact_in_matches_injective_factoring(a3):
    for E in enumerate_all(a3):
        IE = injectivity_ideal(E)
        for s in a3.sequence_at:
            f = a3.ar_sequence_starting(s).mono
            assert is_e_mono(E, f) == is_left_factoring(f, IE)


def test_ideals(a2, a2ids, a3, iv):
    S2, P1, S1 = a2ids
    assert injectivity_ideal(e_bot(a2)) == all_ideal(a2)
    assert projectivity_ideal(e_bot(a2)) == all_ideal(a2)
    assert injectivity_ideal(e_top(a2)) == ideal_from_add(a2, [S1, P1])
    assert injectivity_ideal(e_top(a2)).space(S2, P1).dim == 1
    assert injectivity_ideal(e_top(a2)).space(S2, S2).dim == 0
    E = structure_from_U(a3, set(a3.ids) - {iv(3, 3)})
    assert not injectivity_ideal(E).contains_identity(iv(3, 3))
    assert not projectivity_ideal(E).contains_identity(iv(2, 2))
    for F in enumerate_all(a3):
        assert projectivity_ideal(F) == projectivity_ideal_by_tau(F)
        assert is_fp_idempotent(projectivity_ideal(F))[0]


def test_rel_ext(a2, a2ids, a3, iv):
    S2, P1, S1 = a2ids
    assert rel_ext(e_top(a2), a2.rep(S1), a2.rep(S2)).dim == 1
    for x in a3.ids:
        for y in a3.ids:
            assert rel_ext(e_bot(a3), a3.rep(x), a3.rep(y)).dim == 0
    E = generate(a3, [a3.ar_sequence_starting(iv(3, 3))])
    assert rel_ext(E, a3.rep(iv(2, 2)), a3.rep(iv(3, 3))).dim == 1
    assert rel_ext(E, a3.rep(iv(1, 1)), a3.rep(iv(2, 2))).dim == 0


def test_rel_ext_classes_are_exact(a3):
    # every class in the relative Ext, and every sum of basis classes, realizes to an E-exact sequence
    for E in enumerate_all(a3):
        for x in a3.ids:
            for y in a3.ids:
                X, Y = a3.rep(x), a3.rep(y)
                R = rel_ext(E, X, Y)
                ext = ext_space(X, Y)
                vecs = list(R.classes)
                if len(vecs) > 1:
                    vecs.append([a + b for a, b in zip(vecs[0], vecs[1])])
                for v in vecs:
                    assert is_exact_in(E, realize_extension(ext.cocycle(v), X, Y))


def test_relative_ar_formula_examples(a2, a2ids, a3, iv):
    assert not check_relative_ar_formula(e_bot(a3)).mismatches
    E = generate(a3, [a3.ar_sequence_starting(iv(3, 3))])
    rep = check_relative_ar_formula(E)
    row = next(r for r in rep.rows if (r.x, r.y) == (iv(2, 2), iv(3, 3)))
    assert (row.lhs, row.rhs_tau, row.rhs_tau_inv) == (1, 1, 1)
    S2, P1, S1 = a2ids
    row = next(r for r in check_relative_ar_formula(e_top(a2)).rows if (r.x, r.y) == (S1, S2))
    assert (row.lhs, row.rhs_tau) == (1, 1)


def test_almost_e_monic(a2, a2ids):
    S2, P1, S1 = a2ids
    f = a2.ar_sequence_starting(S2).mono
    assert is_almost_e_monic(e_bot(a2), f)
    assert not is_almost_e_monic(e_top(a2), f)
    z = zero_morphism(a2.rep(S2), zero_rep(a2.quiver))
    assert not is_almost_e_monic(e_bot(a2), z)
    for E in (e_bot(a2), e_top(a2)):
        assert almost_e_monic_by_pushouts(E, f) == is_almost_e_monic(E, f)
        assert almost_e_monic_by_poset(E, f) == is_almost_e_monic(E, f)


def test_almost_e_monic_duality(d4):
    for E in enumerate_all(d4)[::17]:
        for s in d4.sequence_at:
            f = d4.ar_sequence_starting(s).mono
            assert is_almost_e_monic(E, f) == is_almost_e_epic(dual_structure(E), dual_morphism(f))


def test_e_of_module(a2, a2ids, a3, iv):
    S2, P1, S1 = a2ids
    E = e_of_module(a2, S2)
    assert E == e_bot(a2) and is_maximal(E)
    E = e_of_module(a3, iv(2, 3))
    assert E.U == {iv(2, 3), iv(1, 1), iv(1, 2), iv(1, 3)}
    assert is_almost_e_monic(E, a3.ar_sequence_starting(iv(2, 3)).mono)
    with pytest.raises(ValueError):
        e_of_module(a3, iv(1, 3))
    for s in a3.sequence_at:
        c = a3.ar_sequence_starting(s)
        assert in_e_of_module(a3, iv(2, 3), c) == is_exact_in(E, c)


def test_is_maximal(a2, a3, iv):
    assert not is_maximal(e_top(a3))
    assert is_maximal(e_bot(a2))
    assert not is_maximal(generate(a3, [a3.ar_sequence_starting(iv(3, 3))]))


def test_single_generator(a3, iv):
    z = single_generator(e_bot(a3))
    assert z.middle.total_dim == 0
    assert generate(a3, [z]) == e_bot(a3)
    E = structure_from_U(a3, set(a3.ids) - {iv(3, 3), iv(2, 2)})
    assert generate(a3, [single_generator(E)]) == E
    for F in enumerate_all(a3):
        assert generate(a3, [single_generator(F)]) == F


def test_generate_from_sampled_exact_sequences(a3):
    rng = random.Random(0)
    for E in enumerate_all(a3):
        exact = [a3.ar_sequence_starting(s) for s in a3.sequence_at
                 if is_exact_in(E, a3.ar_sequence_starting(s)) and rng.random() < 0.7]
        assert generate(a3, exact) <= E


def test_lattice(a3):
    Es = enumerate_all(a3)
    for E in Es:
        m, j = lattice_ops(E, e_top(a3))
        assert m == E
        m, j = lattice_ops(E, e_bot(a3))
        assert j == E
    for E in Es:
        for F in Es:
            m, j = lattice_ops(E, F)
            assert m <= E and m <= F and E <= j and F <= j


def test_enumeration_counts(a2, a3, d4):
    for ar, n in ((a2, 2), (a3, 8), (d4, 256)):
        assert len(enumerate_all(ar)) == n
        r = oracle_enumerate(ar)
        assert r.count == n and r.subsets == n and r.bijective


def test_closed_sets(a2, a2ids):
    S2, P1, S1 = a2ids
    E, J = closed_set_decompose(a2, a2.ids)
    assert E == e_bot(a2) and J == a2.injectives
    E, J = closed_set_decompose(a2, [])
    assert E == e_top(a2) and J == frozenset()
    E, J = closed_set_decompose(a2, [S2])
    assert E == e_bot(a2) and J == frozenset()
    assert closed_set_compose(E, J) == {S2}
    with pytest.raises(ValueError):
        closed_set_compose(E, [S2])


def test_tau_closed(a2, a2ids, a3):
    S2, P1, S1 = a2ids
    assert tau_closed(a2, a2.projectives) == a2.injectives
    assert tau_closed(a2, {S2, P1, S1}) == frozenset(a2.ids)
    with pytest.raises(ValueError):
        tau_closed(a2, {S1})
    C = a3.projectives | {"m3"}
    assert tau_inv_closed(a3, tau_closed(a3, C)) == C


def test_conflation_validation(a2, a2ids):
    S2, P1, S1 = a2ids
    f = a2.ar_sequence_starting(S2).mono
    with pytest.raises(ValueError):
        Conflation(f, MorphismRep(a2.rep(P1), a2.rep(P1), identity(a2.rep(P1)).maps))

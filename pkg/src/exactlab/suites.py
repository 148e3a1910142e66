"""Verification suites shared by the command line and the acceptance tests.

Each suite returns a SuiteResult whose mismatch entries name the algebra, the
objects involved and the two sides that disagreed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .arknit import ARData, dynkin_type
from .exstruct import (
    almost_e_monic_by_poset,
    almost_e_monic_by_pushouts,
    check_relative_ar_formula,
    closed_set_compose,
    closed_set_decompose,
    defect_support,
    dual_structure,
    e_of_module,
    e_top,
    enumerate_all,
    generate,
    in_e_of_module,
    injectivity_ideal,
    is_almost_e_epic,
    is_almost_e_monic,
    is_exact_in,
    is_maximal,
    non_injectives,
    oracle_enumerate,
    projectivity_ideal,
    projectivity_ideal_by_tau,
    tau_closed,
    tau_inv_closed,
)
from .fpfun import dual_morphism
from .idealcalc import (
    ideal_corpus,
    ideal_from_add,
    is_fp_idempotent,
    is_left_idempotent_sampled,
    is_right_idempotent_sampled,
    omega_power,
    radical_ideal,
    verify_theorem_d,
)
from .kronsym import (
    IST,
    KronConfig,
    P,
    Q,
    R,
    RadOmegaPlusOne,
    RadP,
    RadQ,
    RadRS,
    euler_form,
    family_closed_set,
    hom_table,
    k_rep,
    k_tau_closed,
    rad_c_omega_membership,
    tau_point,
    verify_almost_exact_p1,
    verify_tau,
    with_injectives,
    with_projectives,
)
from .linalg import q
from .repcore import MorphismRep, column_morphism, combine, hom_basis, pushout, zero_morphism


@dataclass
class SuiteResult:
    name: str
    algebra: str
    checks: int = 0
    mismatches: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def check(self, ok: bool, **info) -> bool:
        self.checks += 1
        if not ok:
            self.mismatches.append({"algebra": self.algebra, **info})
        return ok

    def to_json_obj(self) -> dict:
        return {
            "suite": self.name,
            "algebra": self.algebra,
            "checks": self.checks,
            "passed": self.passed,
            "mismatches": self.mismatches,
            "details": self.details,
        }


def algebra_name(ar: ARData) -> str:
    arrows = ",".join(f"{s}->{t}" for _, s, t in ar.quiver.arrows)
    return f"{dynkin_type(ar.quiver)}[{arrows}]"


# -- sampling helpers -----------------------------------------------------------

def _random_map(rng: random.Random, X, Y):
    B = hom_basis(X, Y)
    if not B:
        return None
    coeffs = [q(rng.randint(-2, 2)) for _ in B]
    if not any(coeffs):
        coeffs[rng.randrange(len(B))] = q(1)
    return combine(B, coeffs, X, Y)


def random_mono(ar: ARData, X, rng: random.Random, tries: int = 30) -> MorphismRep:
    """A monomorphism out of X into a sum of at most three indecomposables.
    Falls back to the sum of all maps into injectives, which is always mono."""
    for _ in range(tries):
        maps = []
        for _ in range(rng.randint(1, 3)):
            g = _random_map(rng, X, ar.rep(rng.choice(ar.ids)))
            if g is not None:
                maps.append(g)
        if maps:
            f = column_morphism(maps)
            if f.is_mono():
                return f
    maps = [b for i in ar.sort_ids(ar.injectives) for b in hom_basis(X, ar.rep(i))]
    return column_morphism(maps)


# -- suites over representation-finite algebras -----------------------------------

def suite_enumeration(ar: ARData) -> SuiteResult:
    res = SuiteResult("enumeration", algebra_name(ar))
    oracle = oracle_enumerate(ar)
    mine = {E.U for E in enumerate_all(ar)}
    expected = 1 << len(non_injectives(ar))
    res.check(oracle.count == expected, what="oracle count", lhs=oracle.count, rhs=expected)
    res.check(len(mine) == expected, what="enumerate_all count", lhs=len(mine), rhs=expected)
    res.check(set(oracle.mapping.values()) == mine, what="oracle and enumeration agree",
              lhs=len(set(oracle.mapping.values())), rhs=len(mine))
    res.check(oracle.bijective, what="subset to closed set map is bijective",
              lhs=oracle.count, rhs=oracle.subsets)
    res.details = {"count": len(mine), "oracle_count": oracle.count}
    return res


def suite_axioms(ar: ARData, samples: int = 200, seed: int = 0) -> SuiteResult:
    """Mono compositions and pushouts of E-monos stay E-monos, for every structure."""
    res = SuiteResult("axioms", algebra_name(ar))
    rng = random.Random(seed)
    structures = enumerate_all(ar)
    # an E-mono is exactly a mono whose defect support misses U
    for i in range(samples):
        X = ar.rep(rng.choice(ar.ids))
        f = random_mono(ar, X, rng)
        g = random_mono(ar, f.target, rng)
        sf, sg, sgf = defect_support(ar, f), defect_support(ar, g), defect_support(ar, g @ f)
        for E in structures:
            if not (sf & E.U) and not (sg & E.U):
                res.check(not (sgf & E.U), what="composition", sample=i, U=E.sorted_U(),
                          lhs=sorted(sgf & E.U), rhs=[])
    for i in range(samples):
        X = ar.rep(rng.choice(ar.ids))
        f = random_mono(ar, X, rng)
        Z = ar.rep(rng.choice(ar.ids))
        h = _random_map(rng, X, Z)
        if h is None:
            h = zero_morphism(X, Z)
        _, _, leg = pushout(f, h)
        sf, sl = defect_support(ar, f), defect_support(ar, leg)
        for E in structures:
            if not (sf & E.U):
                res.check(not (sl & E.U), what="pushout", sample=i, U=E.sorted_U(),
                          lhs=sorted(sl & E.U), rhs=[])
    res.details = {"structures": len(structures), "samples": samples}
    return res


def suite_arformula(ar: ARData) -> SuiteResult:
    res = SuiteResult("arformula", algebra_name(ar))
    structures = enumerate_all(ar)
    for E in structures:
        rep = check_relative_ar_formula(E)
        for row in rep.rows:
            res.check(row.lhs == row.rhs_tau, U=rep.U, pair=[row.x, row.y], side="tau",
                      lhs=row.lhs, rhs=row.rhs_tau)
            res.check(row.lhs == row.rhs_tau_inv, U=rep.U, pair=[row.x, row.y], side="tau_inv",
                      lhs=row.lhs, rhs=row.rhs_tau_inv)
    res.details = {"structures": len(structures), "pairs": len(ar.ids) ** 2}
    return res


def suite_idempotence(ar: ARData, count: int = 100, seed: int = 0) -> SuiteResult:
    """The add-U form, sampled left idempotence and dual right idempotence agree."""
    res = SuiteResult("lemma51", algebra_name(ar))
    corpus = ideal_corpus(ar, count, seed)
    positives = 0
    for i, I in enumerate(corpus):
        a = is_fp_idempotent(I)[0]
        b = is_left_idempotent_sampled(I)
        c = is_right_idempotent_sampled(I)
        positives += a
        res.check(a == b == c, ideal=i, add_form=a, left=b, right=c, lhs=int(b), rhs=int(a))
    rad = radical_ideal(ar)
    flags = (is_fp_idempotent(rad)[0], is_left_idempotent_sampled(rad), is_right_idempotent_sampled(rad))
    res.check(flags == (False, False, False), ideal="radical", lhs=list(flags), rhs=[False] * 3)
    res.details = {"corpus": count, "fp_idempotent": positives}
    return res


def suite_omega_recovery(ar: ARData, corpus: int = 100, seed: int = 0, max_subsets: int = 64) -> SuiteResult:
    """Every fp-idempotent ideal is the w-power of the ideal killed by F_max, and
    w-powers of arbitrary ideals are fp-idempotent."""
    res = SuiteResult("theoremD", algebra_name(ar))
    ids = ar.ids
    if (1 << len(ids)) <= max_subsets:
        subsets = [frozenset(U) for k in range(len(ids) + 1) for U in combinations(ids, k)]
    else:
        rng = random.Random(seed)
        subsets = [frozenset(x for x in ids if rng.random() < 0.5) for _ in range(max_subsets)]
    ok = 0
    for U in subsets:
        rep = verify_theorem_d(ideal_from_add(ar, U))
        ok += res.check(rep.passed, U=ar.sort_ids(U), lhs=rep.omega_dim, rhs=rep.ideal_dim)
    for i, J in enumerate(ideal_corpus(ar, corpus, seed)):
        W = omega_power(J)
        res.check(is_fp_idempotent(W)[0], ideal=i, what="omega power fp-idempotent",
                  lhs=W.total_dim, rhs=W.total_dim)
    res.details = {"fp_idempotent_ideals": len(subsets), "passed": ok, "corpus": corpus}
    return res


def suite_maximal_structures(ar: ARData) -> SuiteResult:
    res = SuiteResult("theoremC", algebra_name(ar))
    starts = ar.sort_ids(ar.sequence_at)
    for m in non_injectives(ar):
        E = e_of_module(ar, m)
        res.check(is_maximal(E), module=m, what="maximal", lhs=len(E.U - ar.injectives), rhs=1)
        seq = ar.ar_sequence_starting(m)
        res.check(is_almost_e_monic(E, seq.mono), module=m, what="almost E-monic", lhs=0, rhs=1)
        res.check(almost_e_monic_by_pushouts(E, seq.mono), module=m, what="pushout definition", lhs=0, rhs=1)
        res.check(almost_e_monic_by_poset(E, seq.mono), module=m, what="poset criterion", lhs=0, rhs=1)
        dual_ok = is_almost_e_epic(dual_structure(E), dual_morphism(seq.mono))
        res.check(dual_ok, module=m, what="dual is almost DE-epic", lhs=0, rhs=1)
        failing = [s for s in starts if not is_exact_in(E, ar.ar_sequence_starting(s))]
        res.check(failing == [m], module=m, what="failing almost split sequences", lhs=failing, rhs=[m])
        agree = all(is_exact_in(E, ar.ar_sequence_starting(s)) == in_e_of_module(ar, m, ar.ar_sequence_starting(s))
                    for s in starts)
        res.check(agree, module=m, what="defining predicate", lhs=0, rhs=0)
    res.details = {"modules": len(non_injectives(ar))}
    return res


def suite_closed_roundtrip(ar: ARData) -> SuiteResult:
    res = SuiteResult("cor41", algebra_name(ar))
    ids = ar.ids
    for k in range(len(ids) + 1):
        for C in combinations(ids, k):
            C = frozenset(C)
            E, J = closed_set_decompose(ar, C)
            back = closed_set_compose(E, J)
            res.check(back == C, closed_set=ar.sort_ids(C), lhs=ar.sort_ids(back), rhs=ar.sort_ids(C))
    inj = ar.sort_ids(ar.injectives)
    for E in enumerate_all(ar):
        for k in range(len(inj) + 1):
            for J in combinations(inj, k):
                E2, J2 = closed_set_decompose(ar, closed_set_compose(E, J))
                res.check(E2 == E and J2 == frozenset(J), U=E.sorted_U(), chosen=list(J),
                          lhs=E2.sorted_U(), rhs=E.sorted_U())
    return res


def suite_tau_exchange(ar: ARData) -> SuiteResult:
    res = SuiteResult("prop413", algebra_name(ar))
    for E in enumerate_all(ar):
        IE, PE = injectivity_ideal(E), projectivity_ideal(E)
        res.check(PE == projectivity_ideal_by_tau(E), U=E.sorted_U(), what="P_E computed two ways",
                  lhs=PE.total_dim, rhs=projectivity_ideal_by_tau(E).total_dim)
        for x in ar.ids:
            t = ar.tau(x)
            if t is None:
                continue
            a, b = PE.contains_identity(x), IE.contains_identity(t)
            res.check(a == b, U=E.sorted_U(), object=x, tau=t, lhs=int(a), rhs=int(b))
    return res


def suite_tau_shift(ar: ARData, samples: int = 20, seed: int = 0) -> SuiteResult:
    res = SuiteResult("cor414", algebra_name(ar))
    rng = random.Random(seed)
    free_p = [x for x in ar.ids if x not in ar.projectives]
    free_i = [x for x in ar.ids if x not in ar.injectives]
    for i in range(samples):
        C = ar.projectives | {x for x in free_p if rng.random() < 0.5}
        D = tau_closed(ar, C)
        back = tau_inv_closed(ar, D)
        res.check(back == C and ar.injectives <= D, sample=i, closed_set=ar.sort_ids(C),
                  lhs=ar.sort_ids(back), rhs=ar.sort_ids(C))
        D2 = ar.injectives | {x for x in free_i if rng.random() < 0.5}
        res.check(tau_closed(ar, tau_inv_closed(ar, D2)) == D2, sample=i, closed_set=ar.sort_ids(D2),
                  lhs=ar.sort_ids(tau_closed(ar, tau_inv_closed(ar, D2))), rhs=ar.sort_ids(D2))
        C2 = C | {x for x in free_p if rng.random() < 0.5}
        res.check(tau_closed(ar, C) <= tau_closed(ar, C2), sample=i, what="order preserving",
                  lhs=len(tau_closed(ar, C)), rhs=len(tau_closed(ar, C2)))
        # X in U iff tau X in tau U for the non-projectives
        for x in free_p:
            res.check((x in C) == (ar.tau(x) in D), sample=i, object=x, lhs=int(x in C), rhs=int(ar.tau(x) in D))
    return res


def suite_collapse(ar: ARData) -> SuiteResult:
    """Generating from all almost split sequences gives the abelian structure."""
    res = SuiteResult("collapse", algebra_name(ar))
    E = generate(ar, [ar.ar_sequence_starting(s) for s in ar.sort_ids(ar.sequence_at)])
    res.check(E.U == e_top(ar).U, lhs=E.sorted_U(), rhs=e_top(ar).sorted_U())
    return res


# -- Kronecker ------------------------------------------------------------------------

def kronecker_families(config: KronConfig) -> dict:
    L = list(config.labels)
    return {
        "radP": RadP(),
        "radQ": RadQ(),
        f"radR:{L[0]}": RadRS({L[0]}),
        f"radR:{','.join(L)}": RadRS(set(L)),
        "radw+1": RadOmegaPlusOne(),
        f"ist:{L[0]}:{L[-1]}": IST({L[0]}, {L[-1]}),
        f"ist:{L[0]},{L[1]}:": IST(set(L[:2]), set()),
        f"ist::{L[-1]}": IST(set(), {L[-1]}),
    }


def expected_closed_set(name: str, config: KronConfig) -> dict:
    """The closed sets of the Kronecker dictionary written out by hand."""
    L = list(config.labels)
    table = {
        "radP": ([], L),
        "radQ": (L, []),
        f"radR:{L[0]}": ([L[0]], [L[0]]),
        f"radR:{','.join(L)}": (L, L),
        "radw+1": ([], []),
        f"ist:{L[0]}:{L[-1]}": ([L[0]], [L[-1]]),
        f"ist:{L[0]},{L[1]}:": (L[:2], []),
        f"ist::{L[-1]}": ([], [L[-1]]),
    }
    pr, ad = table[name]
    return {"finite": [], "prufer": pr, "adic": ad, "generic": True}


def suite_kronecker56(config: KronConfig = KronConfig(), depth: int = 8, dim_bound: int = 6) -> SuiteResult:
    res = SuiteResult("kronecker56", f"Kronecker[labels={','.join(config.labels)};bound={config.bound}]")
    for name, fam in kronecker_families(config).items():
        U = family_closed_set(fam, config)
        res.check(U.to_json_obj() == expected_closed_set(name, config), family=name,
                  lhs=U.to_json_obj(), rhs=expected_closed_set(name, config))
        t = k_tau_closed(with_projectives(U), config)
        res.check(t == with_injectives(U), family=name, what="tau(U+proj) = U+inj",
                  lhs=t.to_json_obj(), rhs=with_injectives(U).to_json_obj())
    hom_pairs = 0
    for p, r, h, e, pred in hom_table(config):
        hom_pairs += 1
        chi = euler_form(k_rep(p, config).dims, k_rep(r, config).dims)
        res.check(h == pred and h - e == chi, pair=[str(p), str(r)], lhs=h, rhs=pred, ext=e, euler=chi)
    taus = 0
    for p in config.points():
        t = tau_point(p)
        if t is None or t.n > config.bound:
            continue
        taus += 1
        c = verify_tau(p, config)
        res.check(c.ok, what="matrix-level tau", point=str(p), tau=str(t), lhs=c.socle_dim, rhs=1)
    P1, Q2 = k_rep(P(1), config), k_rep(Q(2), config)
    phi = hom_basis(P1, Q2)[0]
    regular = [R(l, j) for l in config.labels for j in range(1, config.bound + 1)]
    verdict = rad_c_omega_membership(phi, regular, depth, config)
    res.check(verdict == "in-up-to-depth", what="P1->Q2 through regular chains", depth=depth,
              lhs=verdict, rhs="in-up-to-depth")
    for lam in config.labels:
        rep = verify_almost_exact_p1(lam, dim_bound, config)
        res.check(rep.passed, what="almost exact sequence at P1", label=lam, splits=rep.splits,
                  lhs=sum(c.passed for c in rep.cases), rhs=len(rep.cases))
    res.details = {"hom_pairs": hom_pairs, "tau_checks": taus, "families": len(kronecker_families(config)),
                   "radc_verdict": verdict}
    return res


DYNKIN_SUITES = {
    "axioms": suite_axioms,
    "arformula": suite_arformula,
    "lemma51": suite_idempotence,
    "theoremD": suite_omega_recovery,
    "theoremC": suite_maximal_structures,
    "cor41": suite_closed_roundtrip,
    "prop413": suite_tau_exchange,
    "cor414": suite_tau_shift,
    "enumeration": suite_enumeration,
    "collapse": suite_collapse,
}

"""Exact structures on the representations of a Dynkin quiver.

An exact structure is recorded by its closed set U: the indecomposables
that behave as relative injectives.  U always contains the injectives and
determines everything else: a conflation (f, g) belongs to the structure
exactly when the defect functor coker Hom(f, -) vanishes on U.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .arknit import ARData
from .fpfun import FpFunctor, dual_ar, dual_conflation, dual_morphism, eval_dim, support
from .idealcalc import Ideal, dual_ideal, ideal_from_add
from .linalg import Subspace, nullspace, q
from .repcore import (
    Conflation,
    MorphismRep,
    Rep,
    column_morphism,
    combine,
    conflation_sum,
    ext_space,
    hom_ambient_dim,
    hom_basis,
    hom_dim,
    pushforward_ext,
    pushout,
)


@dataclass(frozen=True)
class ExactStructure:
    ar: ARData
    U: frozenset
    generators: tuple = field(default=(), compare=False, hash=False)

    def __post_init__(self):
        missing = self.ar.injectives - self.U
        if missing:
            raise ValueError(f"closed set misses injectives {sorted(missing)}")
        unknown = [u for u in self.U if u not in self.ar.by_id]
        if unknown:
            raise ValueError(f"unknown ids {unknown}")

    def sorted_U(self) -> list[str]:
        return self.ar.sort_ids(self.U)

    def __repr__(self):
        return f"ExactStructure(U={self.sorted_U()})"

    def __le__(self, other: "ExactStructure") -> bool:
        """Inclusion of structures (more conflations means a smaller closed set)."""
        return other.U <= self.U


@dataclass(frozen=True)
class ClosedSet:
    points: frozenset


def e_top(ar: ARData) -> ExactStructure:
    return ExactStructure(ar, ar.injectives)


def e_bot(ar: ARData) -> ExactStructure:
    return ExactStructure(ar, frozenset(ar.ids))


def structure_from_U(ar: ARData, U: Iterable[str]) -> ExactStructure:
    return ExactStructure(ar, frozenset(U))


# -- defects and generation ------------------------------------------------------

def defect_support(ar: ARData, f: MorphismRep) -> frozenset[str]:
    return support(FpFunctor(f), ar)


def generate(ar: ARData, conflations: Sequence[Conflation]) -> ExactStructure:
    hit: set[str] = set()
    for c in conflations:
        if not isinstance(c, Conflation):
            raise TypeError("generate expects Conflation values")
        hit |= defect_support(ar, c.mono)
    U = frozenset(ar.ids) - hit
    if not ar.injectives <= U:
        raise RuntimeError("a conflation's defect meets an injective")
    return ExactStructure(ar, U, tuple(conflations))


def is_e_mono(E: ExactStructure, f: MorphismRep) -> bool:
    return all(eval_dim(FpFunctor(f), E.ar.rep(m)) == 0 for m in E.U)


def is_exact_in(E: ExactStructure, c: Conflation) -> bool:
    return is_e_mono(E, c.mono)


# -- ideals -----------------------------------------------------------------------

def injectivity_ideal(E: ExactStructure) -> Ideal:
    return ideal_from_add(E.ar, E.U)


def projectivity_ideal_by_tau(E: ExactStructure) -> Ideal:
    ar = E.ar
    V = set(ar.projectives) | {ar.tau_inv(m) for m in E.U - ar.injectives}
    return ideal_from_add(ar, V)


def projectivity_ideal(E: ExactStructure) -> Ideal:
    """D I_{DE}, computed on the opposite quiver and dualised back."""
    return dual_ideal(injectivity_ideal(dual_structure(E)))


# -- duality ----------------------------------------------------------------------

def single_generator(E: ExactStructure) -> Conflation:
    ar = E.ar
    starts = ar.sort_ids(set(ar.ids) - E.U)
    return conflation_sum([ar.ar_sequence_starting(m) for m in starts], ar.quiver)


def dual_structure(E: ExactStructure) -> ExactStructure:
    op, _, _ = dual_ar(E.ar)
    return generate(op, [dual_conflation(single_generator(E))])


# -- relative extensions ------------------------------------------------------------

@dataclass
class RelExt:
    dim: int
    ext_dim: int
    classes: list  # coordinate vectors in ext_space(X, Y).basis


def rel_ext(E: ExactStructure, X: Rep, Y: Rep) -> RelExt:
    """Classes in Ext^1(X, Y) whose pushouts to every object of U split."""
    ext = ext_space(X, Y)
    if not ext.dim:
        return RelExt(0, 0, [])
    rows = []
    for m in E.ar.sort_ids(E.U):
        M = E.ar.rep(m)
        target = ext_space(X, M)
        if not target.dim:
            continue
        for phi in hom_basis(Y, M):
            images = [target.class_of(pushforward_ext(phi, z)) for z in ext.basis]
            rows.extend([[img[i] for img in images] for i in range(target.dim)])
    basis = nullspace(rows, ext.dim)
    return RelExt(len(basis), ext.dim, basis)


@dataclass
class ARFormulaRow:
    x: str
    y: str
    lhs: int
    rhs_tau: int
    rhs_tau_inv: int

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs_tau == self.rhs_tau_inv


@dataclass
class ARFormulaReport:
    U: list[str]
    rows: list[ARFormulaRow]

    @property
    def mismatches(self) -> list[ARFormulaRow]:
        return [r for r in self.rows if not r.ok]


def check_relative_ar_formula(E: ExactStructure) -> ARFormulaReport:
    ar = E.ar
    IE = injectivity_ideal(E)
    PE = projectivity_ideal(E)
    rows = []
    for x in ar.ids:
        for y in ar.ids:
            lhs = rel_ext(E, ar.rep(x), ar.rep(y)).dim
            t = ar.tau(x)
            r1 = 0 if t is None else hom_dim(ar.rep(y), ar.rep(t)) - IE.space(y, t).dim
            ti = ar.tau_inv(y)
            r2 = 0 if ti is None else hom_dim(ar.rep(ti), ar.rep(x)) - PE.space(ti, x).dim
            rows.append(ARFormulaRow(x, y, lhs, r1, r2))
    return ARFormulaReport(E.sorted_U(), rows)


# -- almost E-monic morphisms -----------------------------------------------------------

def is_almost_e_monic(E: ExactStructure, f: MorphismRep) -> bool:
    F = FpFunctor(f)
    return sum(eval_dim(F, E.ar.rep(m)) for m in E.U) == 1


def is_almost_e_epic(E: ExactStructure, g: MorphismRep) -> bool:
    return is_almost_e_monic(dual_structure(E), dual_morphism(g))


def sample_maps_from(ar: ARData, X: Rep, seed: int = 0, extra: int = 2) -> list[MorphismRep]:
    """Hom basis elements from X to every indecomposable plus a few rational combinations."""
    rng = random.Random(seed)
    out = []
    for z in ar.ids:
        B = hom_basis(X, ar.rep(z))
        out.extend(B)
        for _ in range(extra if len(B) > 1 else 0):
            out.append(combine(B, [q(rng.randint(-2, 2)) for _ in B], X, ar.rep(z)))
    return out


def almost_e_monic_by_pushouts(E: ExactStructure, f: MorphismRep, samples=None) -> bool:
    """The definition: f is no E-mono, and along every g: X -> Z either the pushout
    leg Z -> P or the map X -> Y (+) Z is an E-mono."""
    if is_e_mono(E, f):
        return False
    for g in samples if samples is not None else sample_maps_from(E.ar, f.source):
        _, _, phi = pushout(f, g)
        if is_e_mono(E, phi):
            continue
        if is_e_mono(E, column_morphism([f, g])):
            continue
        return False
    return True


def _image_functor(IE: Ideal, f: MorphismRep) -> dict[str, Subspace]:
    ar = IE.ar
    out = {}
    for w in ar.ids:
        W = ar.rep(w)
        out[w] = Subspace(hom_ambient_dim(f.source, W), [(h @ f).vector() for h in IE.morphisms(f.target, W)])
    return out


def almost_e_monic_by_poset(E: ExactStructure, f: MorphismRep, samples=None) -> bool:
    """Im I(f,-) is maximal among the proper subfunctors Im I(g,-) of I(X,-)."""
    ar = E.ar
    IE = injectivity_ideal(E)
    X = f.source
    whole = {w: Subspace(hom_ambient_dim(X, ar.rep(w)), [m.vector() for m in IE.morphisms(X, ar.rep(w))])
             for w in ar.ids}
    imf = _image_functor(IE, f)
    if all(imf[w] == whole[w] for w in ar.ids):
        return False
    for g in samples if samples is not None else sample_maps_from(ar, X):
        img = _image_functor(IE, g)
        inside = all(img[w] <= imf[w] for w in ar.ids)
        spans = all((imf[w] + img[w]) == whole[w] for w in ar.ids)
        if not (inside or spans):
            return False
    return True


# -- maximal structure constructions -------------------------------------------------------------

def e_of_module(ar: ARData, m: str) -> ExactStructure:
    ar.check_id(m)
    if ar[m].is_injective:
        raise ValueError(f"{m} is injective")
    return ExactStructure(ar, frozenset({m}) | ar.injectives)


def in_e_of_module(ar: ARData, m: str, c: Conflation) -> bool:
    """The defining predicate: coker Hom(f, M) = 0 for the mono f."""
    return eval_dim(FpFunctor(c.mono), ar.rep(m)) == 0


def is_maximal(E: ExactStructure) -> bool:
    return len(E.U - E.ar.injectives) == 1


# -- lattice and enumeration -----------------------------------------------------------------

def meet(E1: ExactStructure, E2: ExactStructure) -> ExactStructure:
    return ExactStructure(E1.ar, E1.U | E2.U)


def join(E1: ExactStructure, E2: ExactStructure) -> ExactStructure:
    return ExactStructure(E1.ar, E1.U & E2.U)


def lattice_ops(E1: ExactStructure, E2: ExactStructure) -> tuple[ExactStructure, ExactStructure]:
    return meet(E1, E2), join(E1, E2)


def non_injectives(ar: ARData) -> list[str]:
    return [m for m in ar.ids if not ar[m].is_injective]


def enumerate_all(ar: ARData) -> list[ExactStructure]:
    free = non_injectives(ar)
    out = []
    for mask in range(1 << len(free)):
        out.append(ExactStructure(ar, ar.injectives | {m for i, m in enumerate(free) if mask >> i & 1}))
    return out


@dataclass
class OracleResult:
    count: int
    subsets: int
    mapping: dict  # frozenset of AR-sequence start ids -> closed set U
    bijective: bool


def oracle_enumerate(ar: ARData) -> OracleResult:
    """Generate from every subset of almost split sequences and collect the closed sets."""
    starts = sorted(ar.sequence_at, key=ar.ids.index)
    seqs = {s: ar.ar_sequence_starting(s) for s in starts}
    mapping = {}
    for k in range(len(starts) + 1):
        for T in combinations(starts, k):
            mapping[frozenset(T)] = generate(ar, [seqs[s] for s in T]).U
    images = set(mapping.values())
    target_ok = all(ar.injectives <= U for U in images)
    return OracleResult(len(images), len(mapping), mapping,
                        len(images) == len(mapping) and target_ok and len(images) == 1 << len(starts))


# -- closed sets -----------------------------------------------------------------------------

def closed_set_decompose(ar: ARData, C: Iterable[str]) -> tuple[ExactStructure, frozenset]:
    C = frozenset(C)
    return ExactStructure(ar, C | ar.injectives), C & ar.injectives


def closed_set_compose(E: ExactStructure, J: Iterable[str]) -> frozenset:
    J = frozenset(J)
    if not J <= E.ar.injectives:
        raise ValueError("the chosen set must consist of injectives")
    return (E.U - E.ar.injectives) | J


def tau_closed(ar: ARData, C: Iterable[str]) -> frozenset:
    C = frozenset(C)
    if not ar.projectives <= C:
        raise ValueError("closed set must contain every projective")
    return frozenset(ar.tau(m) for m in C - ar.projectives) | ar.injectives


def tau_inv_closed(ar: ARData, D: Iterable[str]) -> frozenset:
    D = frozenset(D)
    if not ar.injectives <= D:
        raise ValueError("closed set must contain every injective")
    return frozenset(ar.tau_inv(m) for m in D - ar.injectives) | ar.projectives


def identity_in(I: Ideal, m: str) -> bool:
    return I.contains_identity(m)

"""Finitely presented functors F = coker Hom(f, -) and Matlis duality."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .arknit import ARData, classify, knit, left_almost_split_map
from .linalg import Subspace, rank
from .repcore import (
    Conflation,
    MorphismRep,
    QuiverMismatch,
    Rep,
    hom_basis,
    hom_dim,
    morphism_sum,
)


@dataclass(frozen=True)
class FpFunctor:
    """coker Hom(f, -) for the presenting morphism ``presenter``."""
    presenter: MorphismRep

    @property
    def source(self) -> Rep:
        return self.presenter.source

    @property
    def target(self) -> Rep:
        return self.presenter.target


@dataclass(frozen=True)
class Evaluation:
    dim: int
    ambient_dim: int
    relations: Subspace  # the image of Hom(target f, M) inside vectorised Hom(source f, M)


def relation_space(F: FpFunctor, M: Rep) -> Subspace:
    f = F.presenter
    from .repcore import hom_ambient_dim
    return Subspace(hom_ambient_dim(f.source, M), [(g @ f).vector() for g in hom_basis(f.target, M)])


def evaluate(F: FpFunctor, M: Rep) -> Evaluation:
    """F(M) = Hom(X, M) modulo the maps that factor through f: X -> Y."""
    f = F.presenter
    if f.source.quiver != M.quiver:
        raise QuiverMismatch("functor and module live over different quivers")
    rel = relation_space(F, M)
    total = hom_dim(f.source, M)
    return Evaluation(total - rel.dim, rel.ambient_dim, rel)


eval = evaluate


@lru_cache(maxsize=None)
def eval_dim(F: FpFunctor, M: Rep) -> int:
    f = F.presenter
    return hom_dim(f.source, M) - rank([(g @ f).vector() for g in hom_basis(f.target, M)],
                                       sum(a * b for a, b in zip(f.source.dims, M.dims)))


def support(F: FpFunctor, ar: ARData) -> frozenset[str]:
    return frozenset(m.id for m in ar.indecs if eval_dim(F, m.rep))


def simple_functor(ar: ARData, mid: str) -> FpFunctor:
    return FpFunctor(left_almost_split_map(ar, mid))


def functor_sum(fs) -> FpFunctor:
    return FpFunctor(morphism_sum([F.presenter for F in fs]))


# -- Matlis duality ------------------------------------------------------------

def dual_rep(M: Rep) -> Rep:
    return Rep(M.quiver.opposite(), M.dims, [m.T for m in M.maps])


def dual_morphism(phi: MorphismRep) -> MorphismRep:
    return MorphismRep(dual_rep(phi.target), dual_rep(phi.source), [m.T for m in phi.maps], check=False)


def dual_conflation(c: Conflation) -> Conflation:
    return Conflation(dual_morphism(c.epi), dual_morphism(c.mono))


@lru_cache(maxsize=None)
def dual_ar(ar: ARData) -> tuple[ARData, dict[str, str], dict[str, MorphismRep]]:
    """The AR data of the opposite quiver, the induced id bijection and
    isomorphisms D(rep x) -> rep(x') on the opposite side."""
    op = knit(ar.quiver.opposite())
    ids, isos = {}, {}
    for m in ar.indecs:
        t, iso = classify(dual_rep(m.rep), op)
        ids[m.id] = t
        isos[m.id] = iso
    return op, ids, isos


def transport_dual(ar: ARData, x: str, y: str, phi: MorphismRep) -> MorphismRep:
    """D(phi) for phi: rep x -> rep y, moved onto the knitted opposite indecomposables."""
    _, _, isos = dual_ar(ar)
    return isos[x] @ dual_morphism(phi) @ isos[y].inverse()


def matlis_dual(x):
    """Dual of a Rep, MorphismRep, Conflation, FpFunctor, Ideal or ExactStructure."""
    from .exstruct import ExactStructure, dual_structure
    from .idealcalc import Ideal, dual_ideal
    if isinstance(x, Rep):
        return dual_rep(x)
    if isinstance(x, MorphismRep):
        return dual_morphism(x)
    if isinstance(x, Conflation):
        return dual_conflation(x)
    if isinstance(x, Ideal):
        return dual_ideal(x)
    if isinstance(x, ExactStructure):
        return dual_structure(x)
    raise TypeError(f"no Matlis dual for {type(x).__name__}")

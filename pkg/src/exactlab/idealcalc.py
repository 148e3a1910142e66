"""Ideals of the category of finite-dimensional representations.

An ideal is stored pairwise on indecomposables: for ids ``(x, y)`` a subspace
of Hom(x, y) in the coordinates of ``hom_space(rep x, rep y)``.  Missing pairs
are zero.  Morphisms between arbitrary representations are tested by
splitting source and target into indecomposables.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .arknit import ARData, decompose
from .fpfun import FpFunctor, dual_ar, functor_sum, simple_functor, transport_dual
from .linalg import ONE, ZERO, Subspace, nullspace, q
from .repcore import (
    MorphismRep,
    Rep,
    column_morphism,
    combine,
    direct_sum,
    factor_through_left,
    factor_through_right,
    hom_ambient_dim,
    hom_basis,
    hom_space,
    identity,
    image,
    radical_of_endomorphisms,
    row_morphism,
    zero_morphism,
    zero_rep,
)


class Ideal:
    __slots__ = ("ar", "spaces", "_key")

    def __init__(self, ar: ARData, spaces: dict[tuple[str, str], Subspace] | None = None):
        self.ar = ar
        self.spaces = {k: v for k, v in (spaces or {}).items() if v.dim}
        self._key = None

    def space(self, x: str, y: str) -> Subspace:
        s = self.spaces.get((x, y))
        if s is None:
            return Subspace(hom_space(self.ar.rep(x), self.ar.rep(y)).dim)
        return s

    def key(self):
        if self._key is None:
            self._key = tuple(sorted((k, v.basis) for k, v in self.spaces.items()))
        return self._key

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.ar is other.ar and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __le__(self, other: "Ideal") -> bool:
        return all(v <= other.space(*k) for k, v in self.spaces.items())

    def __add__(self, other: "Ideal") -> "Ideal":
        out = dict(self.spaces)
        for k, v in other.spaces.items():
            out[k] = out[k] + v if k in out else v
        return Ideal(self.ar, out)

    def __and__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ar, {k: v & other.spaces[k] for k, v in self.spaces.items() if k in other.spaces})

    def __mul__(self, other: "Ideal") -> "Ideal":
        """``I * J`` is J after I: composites g f with f in I and g in J."""
        return ideal_product(self, other)

    def __repr__(self):
        return f"Ideal(total_dim={self.total_dim})"

    @property
    def total_dim(self) -> int:
        return sum(v.dim for v in self.spaces.values())

    def is_zero(self) -> bool:
        return not self.spaces

    def contains_identity(self, x: str) -> bool:
        H = hom_space(self.ar.rep(x), self.ar.rep(x))
        return self.space(x, x).contains(H.coords(identity(self.ar.rep(x))))

    def identity_support(self) -> frozenset[str]:
        return frozenset(x for x in self.ar.ids if self.contains_identity(x))

    def basis_morphisms(self, x: str, y: str) -> list[MorphismRep]:
        H = hom_space(self.ar.rep(x), self.ar.rep(y))
        return [H.element(v) for v in self.space(x, y).basis]

    def contains(self, phi: MorphismRep) -> bool:
        for x, ix, _ in _split(self.ar, phi.source):
            for y, _, py in _split(self.ar, phi.target):
                comp = py @ phi @ ix
                H = hom_space(self.ar.rep(x), self.ar.rep(y))
                if not self.space(x, y).contains(H.coords(comp)):
                    return False
        return True

    def morphisms(self, A: Rep, B: Rep) -> list[MorphismRep]:
        """A spanning list of I(A, B) for arbitrary representations."""
        out = []
        for x, _, px in _split(self.ar, A):
            for y, iy, _ in _split(self.ar, B):
                for b in self.basis_morphisms(x, y):
                    out.append(iy @ b @ px)
        return out

    def to_json_obj(self) -> dict:
        out = {}
        for (x, y) in sorted(self.spaces, key=lambda k: (_idx(self.ar, k[0]), _idx(self.ar, k[1]))):
            out[f"pair:({x},{y})"] = [[str(a) for a in row] for row in self.spaces[(x, y)].basis]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


def _idx(ar: ARData, x: str) -> int:
    return ar.ids.index(x)


@lru_cache(maxsize=None)
def _split(ar: ARData, M: Rep):
    if M.is_zero():
        return ()
    return tuple(decompose(ar, M))


# -- composition tables -----------------------------------------------------------

@lru_cache(maxsize=None)
def _compose_table(ar: ARData, x: str, n: str, y: str):
    """C[a][b] = coordinates of (basis_b of Hom(n,y)) after (basis_a of Hom(x,n))."""
    Hxn = hom_space(ar.rep(x), ar.rep(n))
    Hny = hom_space(ar.rep(n), ar.rep(y))
    Hxy = hom_space(ar.rep(x), ar.rep(y))
    if not (Hxn.dim and Hny.dim and Hxy.dim):
        return None
    return [[Hxy.coords(k @ h) for k in Hny.basis] for h in Hxn.basis]


def _compose_spaces(ar, x, n, y, S_xn: Subspace, S_ny: Subspace) -> list:
    table = _compose_table(ar, x, n, y)
    if table is None or not S_xn.dim or not S_ny.dim:
        return []
    dim_xy = len(table[0][0])
    out = []
    for u in S_xn.basis:
        for w in S_ny.basis:
            v = [ZERO] * dim_xy
            for a, ua in enumerate(u):
                if not ua:
                    continue
                row = table[a]
                for b, wb in enumerate(w):
                    if wb:
                        c = ua * wb
                        for k, t in enumerate(row[b]):
                            if t:
                                v[k] += c * t
            if any(v):
                out.append(v)
    return out


def _full(ar, x, y) -> Subspace:
    return Subspace.full(hom_space(ar.rep(x), ar.rep(y)).dim)


def _saturate(ar: ARData, seeds: dict[tuple[str, str], Subspace]) -> Ideal:
    ids = ar.ids
    pre: dict[tuple[str, str], list] = {}
    for (x, n), S in seeds.items():
        for x2 in ids:
            pre.setdefault((x2, n), []).extend(_compose_spaces(ar, x2, x, n, _full(ar, x2, x), S))
    pre_sp = {k: Subspace(hom_space(ar.rep(k[0]), ar.rep(k[1])).dim, v) for k, v in pre.items()}
    post: dict[tuple[str, str], list] = {}
    for (x2, n), S in pre_sp.items():
        if not S.dim:
            continue
        for y in ids:
            post.setdefault((x2, y), []).extend(_compose_spaces(ar, x2, n, y, S, _full(ar, n, y)))
    return Ideal(ar, {k: Subspace(hom_space(ar.rep(k[0]), ar.rep(k[1])).dim, v) for k, v in post.items()})


# -- constructors -------------------------------------------------------------------

def zero_ideal(ar: ARData) -> Ideal:
    return Ideal(ar)


def all_ideal(ar: ARData) -> Ideal:
    return Ideal(ar, {(x, y): _full(ar, x, y) for x in ar.ids for y in ar.ids})


def ideal_generate(ar: ARData, gens: Iterable[MorphismRep]) -> Ideal:
    seeds: dict[tuple[str, str], list] = {}
    for g in gens:
        if g.source.quiver != ar.quiver:
            from .repcore import QuiverMismatch
            raise QuiverMismatch("generator is not over this algebra")
        for x, ix, _ in _split(ar, g.source):
            for y, _, py in _split(ar, g.target):
                comp = py @ g @ ix
                if not comp.is_zero():
                    H = hom_space(ar.rep(x), ar.rep(y))
                    seeds.setdefault((x, y), []).append(H.coords(comp))
    sp = {k: Subspace(hom_space(ar.rep(k[0]), ar.rep(k[1])).dim, v) for k, v in seeds.items()}
    return _saturate(ar, sp)


def ideal_from_spaces(ar: ARData, seeds: dict[tuple[str, str], Subspace]) -> Ideal:
    """Smallest ideal containing the given pairwise subspaces."""
    return _saturate(ar, seeds)


@lru_cache(maxsize=None)
def _add_ideal(ar: ARData, U: frozenset) -> Ideal:
    out: dict[tuple[str, str], list] = {}
    for n in ar.sort_ids(U):
        for x in ar.ids:
            for y in ar.ids:
                out.setdefault((x, y), []).extend(
                    _compose_spaces(ar, x, n, y, _full(ar, x, n), _full(ar, n, y)))
    return Ideal(ar, {k: Subspace(hom_space(ar.rep(k[0]), ar.rep(k[1])).dim, v) for k, v in out.items()})


def ideal_from_add(ar: ARData, U: Iterable[str]) -> Ideal:
    U = frozenset(U)
    for u in U:
        ar.check_id(u)
    return _add_ideal(ar, U)


@lru_cache(maxsize=None)
def radical_ideal(ar: ARData) -> Ideal:
    sp = {}
    for x in ar.ids:
        for y in ar.ids:
            sp[(x, y)] = radical_of_endomorphisms(ar.rep(x)) if x == y else _full(ar, x, y)
    return Ideal(ar, sp)


# -- products and powers ------------------------------------------------------------

def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    """span{ g f : f in I, g in J }."""
    ar = I.ar
    out: dict[tuple[str, str], list] = {}
    by_src: dict[str, list] = {}
    for (n, y), S in J.spaces.items():
        by_src.setdefault(n, []).append((y, S))
    for (x, n), S in I.spaces.items():
        for y, T in by_src.get(n, ()):
            out.setdefault((x, y), []).extend(_compose_spaces(ar, x, n, y, S, T))
    return Ideal(ar, {k: Subspace(hom_space(ar.rep(k[0]), ar.rep(k[1])).dim, v) for k, v in out.items()})


def ideal_power(I: Ideal, n: int) -> Ideal:
    if n < 1:
        raise ValueError("power must be at least 1")
    P = I
    for _ in range(n - 1):
        P = ideal_product(P, I)
    return P


def _hom_total(ar: ARData) -> int:
    return sum(hom_space(ar.rep(x), ar.rep(y)).dim for x in ar.ids for y in ar.ids)


def omega_power(I: Ideal) -> Ideal:
    """The intersection of all finite powers, reached when the chain stabilises."""
    bound = _hom_total(I.ar) + 1
    P = I
    for _ in range(bound + 1):
        N = ideal_product(P, I)
        if N == P:
            return P
        P = N
    raise RuntimeError("powers did not stabilise within the dimension bound")


@dataclass(frozen=True)
class OrdinalExpr:
    """The ordinal w*q + r."""
    q: int = 0
    r: int = 0

    def __post_init__(self):
        if self.q < 0 or self.r < 0:
            raise ValueError("ordinal coefficients must be nonnegative")

    def __str__(self):
        if not self.q:
            return str(self.r)
        head = "w" if self.q == 1 else f"w*{self.q}"
        return head + (f"+{self.r}" if self.r else "")


def ordinal_power(I: Ideal, alpha: OrdinalExpr) -> Ideal:
    """I^(w*q + r), with I^(lambda + n) = (I^lambda)^(n+1) at limit lambda."""
    if alpha.q == 0:
        if alpha.r == 0:
            raise ValueError("the zeroth power is not defined")
        return ideal_power(I, alpha.r)
    P = I
    for _ in range(alpha.q):
        P = omega_power(P)
    return ideal_power(P, alpha.r + 1)


# -- factoring and idempotence ---------------------------------------------------------

def _span_vectors(vectors, n) -> Subspace:
    return Subspace(n, vectors)


def is_left_factoring(f: MorphismRep, I: Ideal, strongly: bool = False) -> bool:
    """Every phi: X -> Y in I satisfies phi = g f with g (in I when ``strongly``)."""
    return left_factoring_failure(f, I, strongly) is None


def left_factoring_failure(f: MorphismRep, I: Ideal, strongly: bool = False):
    """The first (target id, phi) that does not factor, or None."""
    ar = I.ar
    X, M = f.source, f.target
    for y in ar.ids:
        Y = ar.rep(y)
        phis = I.morphisms(X, Y)
        if not phis:
            continue
        gs = I.morphisms(M, Y) if strongly else hom_basis(M, Y)
        amb = hom_ambient_dim(X, Y)
        reach = Subspace(amb, [(g @ f).vector() for g in gs])
        for phi in phis:
            if not reach.contains(phi.vector()):
                return y, phi
    return None


def is_right_factoring(g: MorphismRep, I: Ideal, strongly: bool = False) -> bool:
    """Every phi: X -> Y in I (Y the target of g) satisfies phi = g h with h (in I)."""
    ar = I.ar
    M, Y = g.source, g.target
    for x in ar.ids:
        X = ar.rep(x)
        phis = I.morphisms(X, Y)
        if not phis:
            continue
        hs = I.morphisms(X, M) if strongly else hom_basis(X, M)
        reach = Subspace(hom_ambient_dim(X, Y), [(g @ h).vector() for h in hs])
        if not all(reach.contains(p.vector()) for p in phis):
            return False
    return True


def is_fp_idempotent(I: Ideal) -> tuple[bool, frozenset | None]:
    U = I.identity_support()
    ok = I == ideal_from_add(I.ar, U)
    return ok, (U if ok else None)


def maximal_fp_idempotent_subideal(I: Ideal) -> Ideal:
    return ideal_from_add(I.ar, I.identity_support())


def left_approximation(I: Ideal, X) -> MorphismRep:
    """A map psi: X -> (+) N in I through which every morphism of I out of X factors."""
    ar = I.ar
    src = ar.rep(X) if isinstance(X, str) else X
    comps = []
    for n in ar.ids:
        comps.extend(I.morphisms(src, ar.rep(n)))
    if not comps:
        return zero_morphism(src, zero_rep(ar.quiver))
    return column_morphism(comps)


def right_approximation(I: Ideal, Y) -> MorphismRep:
    ar = I.ar
    tgt = ar.rep(Y) if isinstance(Y, str) else Y
    comps = []
    for n in ar.ids:
        comps.extend(I.morphisms(ar.rep(n), tgt))
    if not comps:
        return zero_morphism(zero_rep(ar.quiver), tgt)
    return row_morphism(comps)


def _sample_maps(I: Ideal) -> list[MorphismRep]:
    ar = I.ar
    maps = [left_approximation(I, x) for x in ar.ids]
    for x in ar.ids:
        for y in ar.ids:
            maps.extend(hom_basis(ar.rep(x), ar.rep(y)))
    return maps


def left_idempotence_witness(I: Ideal):
    """A left I-factoring morphism that is not strongly left I-factoring, or None.

    The samples are the left approximations of every indecomposable together
    with all Hom basis elements.  If I^2 != I, some phi in I(X, Y) lies
    outside I^2, and the approximation of X is then left but not strongly
    left I-factoring, so the sample set detects every failure.
    """
    for f in _sample_maps(I):
        if is_left_factoring(f, I) and not is_left_factoring(f, I, strongly=True):
            return f
    return None


def is_left_idempotent_sampled(I: Ideal) -> bool:
    return left_idempotence_witness(I) is None


def is_right_idempotent_sampled(I: Ideal) -> bool:
    """Right idempotence of I, read off as left idempotence of its Matlis dual."""
    return is_left_idempotent_sampled(dual_ideal(I))


# -- functors and ideals ------------------------------------------------------------------

def ideal_of_functor_vanishing(ar: ARData, F: FpFunctor) -> Ideal:
    """Morphisms phi with F(phi) = 0, i.e. phi Hom(A, X) inside Hom(B, Y) f for f: A -> B."""
    f = F.presenter
    A, B = f.source, f.target
    sp = {}
    for x in ar.ids:
        X = ar.rep(x)
        hs = hom_basis(A, X)
        for y in ar.ids:
            Y = ar.rep(y)
            H = hom_space(X, Y)
            if not H.dim:
                continue
            if not hs:
                sp[(x, y)] = Subspace.full(H.dim)
                continue
            W = Subspace(hom_ambient_dim(A, Y), [(g @ f).vector() for g in hom_basis(B, Y)])
            cols = []
            for phi in H.basis:
                col = []
                for h in hs:
                    col.extend(W.quotient_coords((phi @ h).vector()))
                cols.append(col)
            rows = [[c[i] for c in cols] for i in range(len(cols[0]))]
            sp[(x, y)] = Subspace(H.dim, nullspace(rows, H.dim))
    return Ideal(ar, sp)


@dataclass
class TheoremDReport:
    witness: list[str]
    fmax_support: list[str]
    vanishing_dim: int
    omega_dim: int
    ideal_dim: int
    equal: bool
    approximations_ok: bool

    @property
    def passed(self) -> bool:
        return self.equal and self.approximations_ok


def verify_theorem_d(I: Ideal) -> TheoremDReport:
    ok, U = is_fp_idempotent(I)
    if not ok:
        raise ValueError("ideal is not fp-idempotent")
    ar = I.ar
    outside = [n for n in ar.ids if n not in U]
    if outside:
        F = functor_sum([simple_functor(ar, n) for n in outside])
    else:
        X = ar.rep(ar.ids[0])
        F = FpFunctor(identity(X))
    IF = ideal_of_functor_vanishing(ar, F)
    W = omega_power(IF)
    approx_ok = True
    for x in ar.ids:
        psi = left_approximation(IF, x)
        if not (IF.contains(psi) and is_left_factoring(psi, IF)):
            approx_ok = False
    return TheoremDReport(ar.sort_ids(U), outside, IF.total_dim, W.total_dim, I.total_dim,
                          W == I, approx_ok)


@dataclass
class OmegaSubidealReport:
    omega_dim: int
    maximal_dim: int
    omega_equals_maximal: bool
    omega_equals_zero: bool
    omega_inside_maximal: bool


def omega_subideal_report(I: Ideal) -> OmegaSubidealReport:
    W = omega_power(I)
    J = maximal_fp_idempotent_subideal(I)
    return OmegaSubidealReport(W.total_dim, J.total_dim, W == J, W.is_zero(), W <= J and J <= I)


# -- trace factorisation --------------------------------------------------------------

@dataclass
class TraceFactorization:
    epi: MorphismRep      # X -> C'
    middle: MorphismRep   # C' -> C''
    mono: MorphismRep     # C'' -> Y
    starts_ok: bool
    ends_ok: bool

    @property
    def c_prime(self) -> Rep:
        return self.epi.target

    @property
    def c_second(self) -> Rep:
        return self.mono.source


def _add_approximation(ar: ARData, U, C: Rep) -> MorphismRep:
    comps = []
    for n in ar.sort_ids(U):
        comps.extend(hom_basis(C, ar.rep(n)))
    if not comps:
        return zero_morphism(C, zero_rep(ar.quiver))
    return column_morphism(comps)


def trace_factorize(phi: MorphismRep, I: Ideal) -> TraceFactorization:
    """phi = mono . middle . epi with X ->> C' in s(I), C'' = tY in e(I), middle in I."""
    ok, U = is_fp_idempotent(I)
    if not ok:
        raise ValueError("ideal is not fp-idempotent")
    if not I.contains(phi):
        raise ValueError("morphism does not lie in the ideal")
    ar = I.ar
    X, Y = phi.source, phi.target
    if phi.is_zero():
        Z = zero_rep(ar.quiver)
        return TraceFactorization(zero_morphism(X, Z), identity(Z), zero_morphism(Z, Y), True, True)
    C1, eps, _ = image(left_approximation(I, X))
    C2, _, iota = image(right_approximation(I, Y))
    m2 = factor_through_left(phi, eps)
    a = _add_approximation(ar, U, C1)
    b = factor_through_left(m2, a)
    b2 = factor_through_right(b, iota)
    if m2 is None or b is None or b2 is None:
        raise RuntimeError("trace factorisation failed")
    mid = b2 @ a
    if iota @ mid @ eps != phi:
        raise RuntimeError("trace factorisation does not recompose")
    DA = direct_sum([ar.rep(i) for i in ar.sort_ids(ar.injectives)])
    PA = direct_sum([ar.rep(p) for p in ar.sort_ids(ar.projectives)])
    starts = _ideal_full(I, C1, DA)
    ends = _ideal_full(I, PA, C2)
    return TraceFactorization(eps, mid, iota, starts, ends)


def _ideal_full(I: Ideal, A: Rep, B: Rep) -> bool:
    amb = hom_ambient_dim(A, B)
    return Subspace(amb, [m.vector() for m in I.morphisms(A, B)]).dim == len(hom_basis(A, B))


# -- duality --------------------------------------------------------------------------

def dual_ideal(I: Ideal) -> Ideal:
    ar = I.ar
    op, ids, _ = dual_ar(ar)
    sp = {}
    for (x, y), S in I.spaces.items():
        H = hom_space(op.rep(ids[y]), op.rep(ids[x]))
        vecs = [H.coords(transport_dual(ar, x, y, phi)) for phi in I.basis_morphisms(x, y)]
        sp[(ids[y], ids[x])] = Subspace(H.dim, vecs)
    return Ideal(op, sp)


# -- deterministic corpus -------------------------------------------------------------

def _random_morphism(rng: random.Random, ar: ARData) -> MorphismRep | None:
    x, y = rng.choice(ar.ids), rng.choice(ar.ids)
    B = hom_basis(ar.rep(x), ar.rep(y))
    if not B:
        return None
    coeffs = [q(rng.randint(-2, 2)) for _ in B]
    if not any(coeffs):
        coeffs[0] = ONE
    return combine(B, coeffs, ar.rep(x), ar.rep(y))


def ideal_corpus(ar: ARData, count: int = 100, seed: int = 0) -> list[Ideal]:
    """A reproducible mix of generated, add-type, summed and powered ideals."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        kind = len(out) % 5
        if kind == 0 or kind == 3:
            gens = [g for g in (_random_morphism(rng, ar) for _ in range(rng.randint(1, 3))) if g is not None]
            I = ideal_generate(ar, gens)
            if kind == 3:
                I = ideal_power(I, 2)
        elif kind == 1:
            U = [x for x in ar.ids if rng.random() < 0.3]
            I = ideal_from_add(ar, U)
        elif kind == 2:
            gens = [g for g in (_random_morphism(rng, ar) for _ in range(2)) if g is not None]
            U = [rng.choice(ar.ids)]
            I = ideal_generate(ar, gens) + ideal_from_add(ar, U)
        else:
            I = ideal_power(radical_ideal(ar), rng.randint(1, 3)) + ideal_from_add(ar, [rng.choice(ar.ids)])
        out.append(I)
    return out

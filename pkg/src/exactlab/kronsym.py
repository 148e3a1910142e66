"""The Kronecker quiver 1 => 2: matrix models up to a bound and a symbolic
Ziegler spectrum with Prufer, adic and generic points."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .linalg import ONE, ZERO, Mat, Subspace, mpq, nullspace, q
from .fpfun import FpFunctor, eval_dim
from .repcore import (
    Conflation,
    MorphismRep,
    Quiver,
    Rep,
    column_morphism,
    combine,
    ext_space,
    hom_ambient_dim,
    hom_basis,
    hom_dim,
    hom_space,
    kernel_cokernel,
    morphism_from_vector,
    pullback_ext,
    pushout,
    radical_of_endomorphisms,
    realize_extension,
    split_retraction,
    zero_morphism,
)

KRONECKER = Quiver(2, [("a", 1, 2), ("b", 1, 2)])
INF = "inf"
DEFAULT_LABELS = ("0", "1", INF)
DEFAULT_BOUND = 6


def normalize_label(label) -> str:
    s = str(label).strip().lower()
    if s in ("inf", "infinity", "oo", "∞"):
        return INF
    try:
        return str(Fraction(s))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"bad label {label!r}") from None


def _label_key(label: str):
    return (1, 0) if label == INF else (0, Fraction(label))


def sort_labels(labels: Iterable[str]) -> list[str]:
    return sorted(labels, key=_label_key)


@dataclass(frozen=True)
class KPoint:
    kind: str            # P, Q, R, Prufer, Adic, Generic
    n: int | None = None
    label: str | None = None

    def __post_init__(self):
        if self.kind not in ("P", "Q", "R", "Prufer", "Adic", "Generic"):
            raise ValueError(f"unknown point kind {self.kind}")
        if self.kind in ("P", "Q", "R") and (self.n is None or self.n < 1):
            raise ValueError("finite points need an index n >= 1")

    @property
    def finite(self) -> bool:
        return self.kind in ("P", "Q", "R")

    def __str__(self):
        if self.kind in ("P", "Q"):
            return f"{self.kind}{self.n}"
        if self.kind == "R":
            return f"R({self.label},{self.n})"
        if self.kind == "Generic":
            return "G"
        return f"{self.kind}({self.label})"

    def sort_key(self):
        order = {"P": 0, "R": 1, "Q": 2, "Prufer": 3, "Adic": 4, "Generic": 5}
        return (order[self.kind], _label_key(self.label) if self.label else (0, 0), self.n or 0)


def P(n): return KPoint("P", n)
def Q(n): return KPoint("Q", n)
def R(label, n): return KPoint("R", n, normalize_label(label))


@dataclass(frozen=True)
class KronConfig:
    labels: tuple = DEFAULT_LABELS
    bound: int = DEFAULT_BOUND

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(sort_labels({normalize_label(x) for x in self.labels})))
        if self.bound < 1:
            raise ValueError("bound must be at least 1")

    def points(self) -> list[KPoint]:
        """All finite points with index at most the bound."""
        out = [P(n) for n in range(1, self.bound + 1)]
        out += [R(l, n) for l in self.labels for n in range(1, self.bound + 1)]
        out += [Q(n) for n in range(1, self.bound + 1)]
        return out

    def check(self, p: KPoint) -> None:
        if not p.finite:
            raise ValueError(f"{p} has no matrix model")
        if p.n > self.bound:
            raise ValueError(f"{p} exceeds the bound {self.bound}")
        if p.kind == "R" and p.label not in self.labels:
            raise ValueError(f"unknown label {p.label}")


# -- matrix models ---------------------------------------------------------------

def _jordan(n: int, lam) -> Mat:
    return Mat(n, n, [[q(lam) if i == j else (ONE if j == i + 1 else ZERO) for j in range(n)] for i in range(n)])


@lru_cache(maxsize=None)
def _k_rep(p: KPoint) -> Rep:
    n = p.n
    if p.kind == "P":
        top = Mat.identity(n - 1).vstack(Mat(1, n - 1))
        bot = Mat(1, n - 1).vstack(Mat.identity(n - 1))
        return Rep(KRONECKER, (n - 1, n), [top, bot])
    if p.kind == "Q":
        left = Mat.identity(n - 1).hstack(Mat(n - 1, 1))
        right = Mat(n - 1, 1).hstack(Mat.identity(n - 1))
        return Rep(KRONECKER, (n, n - 1), [left, right])
    if p.label == INF:
        return Rep(KRONECKER, (n, n), [_jordan(n, 0), Mat.identity(n)])
    return Rep(KRONECKER, (n, n), [Mat.identity(n), _jordan(n, mpq(p.label))])


def k_rep(p: KPoint, config: KronConfig = KronConfig()) -> Rep:
    config.check(p)
    return _k_rep(p)


def euler_form(x: Sequence[int], y: Sequence[int]) -> int:
    return x[0] * y[0] + x[1] * y[1] - 2 * x[0] * y[1]


def k_hom_dim(p: KPoint, r: KPoint, config: KronConfig = KronConfig()) -> int:
    return hom_dim(k_rep(p, config), k_rep(r, config))


def predicted_hom_dim(p: KPoint, r: KPoint) -> int:
    """dim Hom from the Euler form and the known vanishing pattern of the components."""
    e = euler_form(_k_rep(p).dims, _k_rep(r).dims)
    a, b = p.kind, r.kind
    if a == "P":
        if b == "P":
            return e if r.n >= p.n else 0
        return e
    if a == "R":
        if b == "P":
            return 0
        if b == "R":
            return min(p.n, r.n) if p.label == r.label else 0
        return e
    if b == "Q":
        return e if r.n <= p.n else 0
    return 0


def classify_kind(M: Rep) -> str:
    """Preprojective, regular or preinjective by the dimension vector of an indecomposable."""
    d1, d2 = M.dims
    if d2 == d1 + 1:
        return "P"
    if d1 == d2 + 1:
        return "Q"
    if d1 == d2:
        return "R"
    raise ValueError(f"{M.dims} is not the dimension vector of an indecomposable")


# -- AR translation at matrix level -------------------------------------------------

def tau_point(p: KPoint) -> KPoint | None:
    if p.kind == "P":
        return P(p.n - 2) if p.n > 2 else None
    if p.kind == "Q":
        return Q(p.n + 2)
    if p.kind == "R":
        return p
    raise ValueError(f"{p} has no matrix-level translate")


def tau_inv_point(p: KPoint) -> KPoint | None:
    if p.kind == "P":
        return P(p.n + 2)
    if p.kind == "Q":
        return Q(p.n - 2) if p.n > 2 else None
    return p


@dataclass
class TauCheck:
    point: KPoint
    tau: KPoint
    socle_dim: int
    middle_dims: tuple
    defect_ok: bool

    @property
    def ok(self) -> bool:
        return self.socle_dim == 1 and self.defect_ok


def almost_split_class(Z: Rep, T: Rep):
    """The classes in Ext^1(Z, T) killed by pullback along every radical endomorphism of Z."""
    ext = ext_space(Z, T)
    Hzz = hom_space(Z, Z)
    rad = radical_of_endomorphisms(Z)
    rows = []
    for v in rad.basis:
        r = Hzz.element(v)
        images = [ext.class_of(pullback_ext(r, z)) for z in ext.basis]
        rows.extend([[img[i] for img in images] for i in range(ext.dim)])
    return ext, nullspace(rows, ext.dim)


def verify_tau(p: KPoint, config: KronConfig = KronConfig()) -> TauCheck:
    """Build the almost split sequence ending at p and test its defect on all in-bound points."""
    t = tau_point(p)
    if t is None:
        raise ValueError(f"{p} is projective")
    Z, T = k_rep(p, config), k_rep(t, config)
    ext, soc = almost_split_class(Z, T)
    if len(soc) != 1:
        return TauCheck(p, t, len(soc), (), False)
    conf = realize_extension(ext.cocycle(soc[0]), Z, T)
    F = FpFunctor(conf.mono)
    ok = True
    for m in config.points():
        want = 1 if m == t else 0
        if eval_dim(F, k_rep(m, config)) != want:
            ok = False
            break
    return TauCheck(p, t, 1, conf.middle.dims, ok)


# -- symbolic closed sets -------------------------------------------------------------

@dataclass(frozen=True)
class KClosedSet:
    finite_points: frozenset = frozenset()
    prufer_labels: frozenset = frozenset()
    adic_labels: frozenset = frozenset()
    generic: bool = False

    def to_json_obj(self) -> dict:
        return {
            "finite": [str(p) for p in sorted(self.finite_points, key=KPoint.sort_key)],
            "prufer": sort_labels(self.prufer_labels),
            "adic": sort_labels(self.adic_labels),
            "generic": self.generic,
        }


@dataclass(frozen=True)
class KIdealFamily:
    kind: str                 # RadP, RadQ, RadRS, RadOmegaPlusOne, IST
    S: frozenset = frozenset()
    T: frozenset = frozenset()

    def __post_init__(self):
        if self.kind not in ("RadP", "RadQ", "RadRS", "RadOmegaPlusOne", "IST"):
            raise ValueError(f"unknown family {self.kind}")
        object.__setattr__(self, "S", frozenset(normalize_label(x) for x in self.S))
        object.__setattr__(self, "T", frozenset(normalize_label(x) for x in self.T))
        if self.kind == "RadRS" and not self.S:
            raise ValueError("RadRS needs a non-empty label set")
        if self.kind == "IST" and not (self.S or self.T):
            raise ValueError("IST needs S or T non-empty")
        if self.kind in ("RadP", "RadQ", "RadOmegaPlusOne") and (self.S or self.T):
            raise ValueError(f"{self.kind} takes no labels")


def RadP(): return KIdealFamily("RadP")
def RadQ(): return KIdealFamily("RadQ")
def RadRS(S): return KIdealFamily("RadRS", frozenset(S))
def RadOmegaPlusOne(): return KIdealFamily("RadOmegaPlusOne")
def IST(S, T): return KIdealFamily("IST", frozenset(S), frozenset(T))


def family_closed_set(fam: KIdealFamily, config: KronConfig = KronConfig()) -> KClosedSet:
    L = frozenset(config.labels)
    for lab in fam.S | fam.T:
        if lab not in L:
            raise ValueError(f"label {lab} is not in the configured label set")
    if fam.kind == "RadP":
        return KClosedSet(adic_labels=L, generic=True)
    if fam.kind == "RadQ":
        return KClosedSet(prufer_labels=L, generic=True)
    if fam.kind == "RadRS":
        return KClosedSet(prufer_labels=fam.S, adic_labels=fam.S, generic=True)
    if fam.kind == "RadOmegaPlusOne":
        return KClosedSet(generic=True)
    return KClosedSet(prufer_labels=fam.S, adic_labels=fam.T, generic=True)


def parse_family(text: str) -> KIdealFamily:
    """radP | radQ | radR:S | radw+1 | ist:S:T with S, T comma separated label lists."""
    parts = text.strip().split(":")
    head = parts[0].lower()
    labels = lambda s: frozenset(x for x in s.split(",") if x.strip()) if s else frozenset()
    if head == "radp" and len(parts) == 1:
        return RadP()
    if head == "radq" and len(parts) == 1:
        return RadQ()
    if head == "radr" and len(parts) == 2:
        return RadRS(labels(parts[1]))
    if head in ("radw+1", "rad^(w+1)") and len(parts) == 1:
        return RadOmegaPlusOne()
    if head == "ist" and len(parts) == 3:
        return IST(labels(parts[1]), labels(parts[2]))
    raise ValueError(f"cannot parse family {text!r}")


def k_tau_closed(U: KClosedSet, config: KronConfig = KronConfig()) -> KClosedSet:
    """tau on a closed set containing the projectives P1, P2; the infinite part is kept."""
    proj = {P(1), P(2)}
    if not proj <= U.finite_points:
        raise ValueError("closed set must contain the projectives P1 and P2")
    moved = set()
    for p in U.finite_points - proj:
        t = tau_point(p)
        config.check(t)
        moved.add(t)
    return KClosedSet(frozenset(moved | {Q(1), Q(2)}), U.prufer_labels, U.adic_labels, U.generic)


def with_projectives(U: KClosedSet) -> KClosedSet:
    return KClosedSet(U.finite_points | {P(1), P(2)}, U.prufer_labels, U.adic_labels, U.generic)


def with_injectives(U: KClosedSet) -> KClosedSet:
    return KClosedSet(U.finite_points | {Q(1), Q(2)}, U.prufer_labels, U.adic_labels, U.generic)


# -- bounded radical chains ---------------------------------------------------------------

@lru_cache(maxsize=None)
def _radical_basis(c: Rep, d: Rep) -> tuple:
    if c == d:
        H = hom_space(c, c)
        return tuple(H.element(v) for v in radical_of_endomorphisms(c).basis)
    return tuple(hom_basis(c, d))


def rad_c_omega_membership(phi: MorphismRep, C: Iterable[KPoint], depth: int,
                           config: KronConfig = KronConfig()) -> str:
    """'out' if phi misses the span of chains X -> C1 -> ... -> Cn -> Y for some n <= depth
    (Ci in C, consecutive links radical); 'in' only for phi = 0."""
    if phi.is_zero():
        return "in"
    if depth < 1:
        raise ValueError("depth must be at least 1")
    X, Y = phi.source, phi.target
    reps = [k_rep(c, config) for c in sorted(set(C), key=KPoint.sort_key)]
    # reach[i]: span of chain composites X -> ... -> C_i, as vectors in Hom(X, C_i)
    reach = [Subspace(hom_ambient_dim(X, c), [m.vector() for m in hom_basis(X, c)]) for c in reps]
    target = phi.vector()
    amb = hom_ambient_dim(X, Y)
    for n in range(1, depth + 1):
        ends = []
        for c, S in zip(reps, reach):
            if not S.dim:
                continue
            starts = [morphism_from_vector(X, c, v) for v in S.basis]
            for g in hom_basis(c, Y):
                ends.extend((g @ s).vector() for s in starts)
        if not Subspace(amb, ends).contains(target):
            return "out"
        if n == depth:
            break
        nxt = []
        for j, d in enumerate(reps):
            vecs = []
            for c, S in zip(reps, reach):
                if not S.dim:
                    continue
                starts = [morphism_from_vector(X, c, v) for v in S.basis]
                for r in _radical_basis(c, d):
                    vecs.extend((r @ s).vector() for s in starts)
            nxt.append(Subspace(hom_ambient_dim(X, d), vecs))
        reach = nxt
    return "in-up-to-depth"


# -- the almost exact sequence starting at P1 ------------------------------------------------

@dataclass
class CaseOutcome:
    target: str
    morphism: int
    case: str
    passed: bool


@dataclass
class AlmostExactReport:
    label: str
    bound: int
    splits: bool
    cases: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.splits and all(c.passed for c in self.cases)


def p1_sequence(label: str, config: KronConfig = KronConfig()):
    """0 -> P1 -> R(label,1) -> Q1 -> 0."""
    P1, R1, Q1 = k_rep(P(1), config), k_rep(R(label, 1), config), k_rep(Q(1), config)
    f = MorphismRep(P1, R1, [Mat(1, 0), Mat.identity(1)])
    g = MorphismRep(R1, Q1, [Mat.identity(1), Mat(0, 1)])
    return Conflation(f, g)


def _maps_to_preinjectives_factor(h: MorphismRep, config: KronConfig) -> bool:
    """Every map from the source of h to an in-bound preinjective factors through h."""
    X = h.source
    for k in range(1, config.bound + 1):
        Qk = k_rep(Q(k), config)
        maps = hom_basis(X, Qk)
        if not maps:
            continue
        reach = Subspace(hom_ambient_dim(X, Qk), [(g @ h).vector() for g in hom_basis(h.target, Qk)])
        if not all(reach.contains(m.vector()) for m in maps):
            return False
    return True


def _is_regular(M: Rep, config: KronConfig) -> bool:
    for j in range(1, config.bound + 1):
        if hom_basis(M, k_rep(P(j), config)) or hom_basis(k_rep(Q(j), config), M):
            return False
    return True


def verify_almost_exact_p1(label, dim_bound: int, config: KronConfig = KronConfig()) -> AlmostExactReport:
    label = normalize_label(label)
    if dim_bound < 3:
        raise ValueError("dimension bound too small to contain any preprojective beyond P1")
    seq = p1_sequence(label, config)
    f = seq.mono
    rep = AlmostExactReport(label, dim_bound, split_retraction(f) is not None)
    targets = [p for p in config.points() if sum(_k_rep(p).dims) <= dim_bound]
    P1 = f.source
    for z in targets:
        Z = k_rep(z, config)
        basis = hom_basis(P1, Z)
        samples = list(basis)
        if len(basis) > 1:
            samples.append(combine(basis, [q(i + 1) for i in range(len(basis))], P1, Z))
            samples.append(combine(basis, [mpq(1, i + 2) for i in range(len(basis))], P1, Z))
        if not basis:
            samples = [zero_morphism(P1, Z)]
        for i, g in enumerate(samples):
            _, _, leg = pushout(f, g)
            if z.kind != "P":
                rep.cases.append(CaseOutcome(str(z), i, "source-not-preprojective", leg.is_mono()))
            elif g.is_zero():
                rep.cases.append(CaseOutcome(str(z), i, "zero-map-split", split_retraction(leg) is not None))
            elif z.n == 1:
                h = column_morphism([f, g])
                rep.cases.append(CaseOutcome(str(z), i, "identity-split", split_retraction(h) is not None))
            else:
                kc = kernel_cokernel(g)
                ok = g.is_mono() and _is_regular(kc.coker, config)
                h = column_morphism([f, g])
                ok = ok and _maps_to_preinjectives_factor(g, config) and _maps_to_preinjectives_factor(h, config)
                rep.cases.append(CaseOutcome(str(z), i, "mono-regular-cokernel", ok))
    return rep


def hom_table(config: KronConfig = KronConfig()) -> list[tuple[KPoint, KPoint, int, int, int]]:
    """(p, r, dim Hom, dim Ext, predicted dim Hom) for every in-bound pair."""
    pts = config.points()
    out = []
    for p in pts:
        for r in pts:
            X, Y = k_rep(p, config), k_rep(r, config)
            out.append((p, r, hom_dim(X, Y), ext_space(X, Y).dim, predicted_hom_dim(p, r)))
    return out

"""Finite-dimensional quiver representations over Q.

Vertices are labelled ``1..n``; an arrow ``a: s -> t`` of a representation
``M`` is a matrix of shape ``dim M_t x dim M_s``.  A morphism ``phi: M -> N``
carries one matrix ``phi_v: M_v -> N_v`` per vertex.

Morphisms are vectorised by concatenating the row-major entries of the
vertex maps in vertex order; Hom and Ext spaces are computed as solution
spaces and cokernels of linear systems in that coordinate space.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .linalg import ONE, ZERO, Mat, Subspace, block, block_diag, nullspace, q, rank, rref, solve


class QuiverMismatch(ValueError):
    pass


class Quiver:
    __slots__ = ("vertex_count", "arrows", "_hash")

    def __init__(self, vertex_count: int, arrows: Sequence[tuple[str, int, int]]):
        self.vertex_count = vertex_count
        self.arrows = tuple((str(name), int(s), int(t)) for name, s, t in arrows)
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be unique")
        for name, s, t in self.arrows:
            if not (1 <= s <= vertex_count and 1 <= t <= vertex_count):
                raise ValueError(f"arrow {name} uses a vertex outside 1..{vertex_count}")
        self._hash = hash((self.vertex_count, self.arrows))

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    def __eq__(self, other):
        return isinstance(other, Quiver) and self.vertex_count == other.vertex_count and self.arrows == other.arrows

    def __hash__(self):
        return self._hash

    def __repr__(self):
        arr = ", ".join(f"{n}:{s}->{t}" for n, s, t in self.arrows)
        return f"Quiver({self.vertex_count}; {arr})"

    def opposite(self) -> "Quiver":
        return Quiver(self.vertex_count, [(n, t, s) for n, s, t in self.arrows])

    def topological_order(self) -> list[int]:
        """Sources first; ties broken by vertex label."""
        indeg = {v: 0 for v in self.vertices}
        for _, _, t in self.arrows:
            indeg[t] += 1
        order = []
        ready = sorted(v for v, d in indeg.items() if d == 0)
        while ready:
            v = ready.pop(0)
            order.append(v)
            for _, s, t in self.arrows:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        ready.append(t)
                        ready.sort()
        if len(order) != self.vertex_count:
            raise ValueError("quiver has an oriented cycle")
        return order

    def euler_form(self, x: Sequence[int], y: Sequence[int]) -> int:
        return (sum(a * b for a, b in zip(x, y))
                - sum(x[s - 1] * y[t - 1] for _, s, t in self.arrows))


class Rep:
    """A representation: a dimension per vertex and a matrix per arrow."""

    __slots__ = ("quiver", "dims", "maps", "_hash")

    def __init__(self, quiver: Quiver, dims: Sequence[int], maps: Sequence[Mat] | None = None):
        self.quiver = quiver
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != quiver.vertex_count or any(d < 0 for d in self.dims):
            raise ValueError(f"bad dimension vector {self.dims} for {quiver}")
        if maps is None:
            maps = [Mat(self.dims[t - 1], self.dims[s - 1]) for _, s, t in quiver.arrows]
        maps = tuple(m if isinstance(m, Mat) else Mat.from_rows(m, self.dims[s - 1])
                     for m, (_, s, _t) in zip(maps, quiver.arrows))
        if len(maps) != len(quiver.arrows):
            raise ValueError("one matrix per arrow required")
        for m, (name, s, t) in zip(maps, quiver.arrows):
            if m.shape != (self.dims[t - 1], self.dims[s - 1]):
                raise ValueError(f"arrow {name}: matrix {m.shape} does not fit dims "
                                 f"{self.dims[t - 1]}x{self.dims[s - 1]}")
        self.maps = maps
        self._hash = hash((quiver, self.dims, self.maps))

    def dim(self, v: int) -> int:
        return self.dims[v - 1]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def arrow_map(self, name: str) -> Mat:
        for m, (n, _, _) in zip(self.maps, self.quiver.arrows):
            if n == name:
                return m
        raise KeyError(name)

    def __eq__(self, other):
        return (isinstance(other, Rep) and self._hash == other._hash and self.quiver == other.quiver
                and self.dims == other.dims and self.maps == other.maps)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Rep{self.dims}"


class MorphismRep:
    __slots__ = ("source", "target", "maps", "_hash")

    def __init__(self, source: Rep, target: Rep, maps: Sequence[Mat], check: bool = True):
        if source.quiver != target.quiver:
            raise QuiverMismatch("morphism between representations of different quivers")
        self.source = source
        self.target = target
        maps = tuple(m if isinstance(m, Mat) else Mat.from_rows(m, source.dims[i])
                     for i, m in enumerate(maps))
        if len(maps) != source.quiver.vertex_count:
            raise ValueError("one matrix per vertex required")
        for v, m in zip(source.quiver.vertices, maps):
            if m.shape != (target.dim(v), source.dim(v)):
                raise ValueError(f"vertex {v}: matrix {m.shape} does not fit "
                                 f"{target.dim(v)}x{source.dim(v)}")
        self.maps = maps
        if check and not self.is_intertwiner():
            raise ValueError("vertex maps do not commute with the arrow maps")
        self._hash = None

    def is_intertwiner(self) -> bool:
        for k, (_, s, t) in enumerate(self.source.quiver.arrows):
            if self.target.maps[k] @ self.maps[s - 1] != self.maps[t - 1] @ self.source.maps[k]:
                return False
        return True

    def at(self, v: int) -> Mat:
        return self.maps[v - 1]

    def __eq__(self, other):
        return (isinstance(other, MorphismRep) and self.source == other.source
                and self.target == other.target and self.maps == other.maps)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.source, self.target, self.maps))
        return self._hash

    def __repr__(self):
        return f"Morphism({self.source!r} -> {self.target!r})"

    def __matmul__(self, other: "MorphismRep") -> "MorphismRep":
        """``g @ f`` is the composite g after f."""
        if other.target != self.source:
            raise ValueError("morphisms are not composable")
        return MorphismRep(other.source, self.target,
                           [a @ b for a, b in zip(self.maps, other.maps)], check=False)

    def __add__(self, other: "MorphismRep") -> "MorphismRep":
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("cannot add morphisms with different ends")
        return MorphismRep(self.source, self.target, [a + b for a, b in zip(self.maps, other.maps)], check=False)

    def __sub__(self, other: "MorphismRep") -> "MorphismRep":
        return self + other.scale(-1)

    def scale(self, c) -> "MorphismRep":
        return MorphismRep(self.source, self.target, [m.scale(c) for m in self.maps], check=False)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.maps)

    def vector(self) -> list:
        return [a for m in self.maps for a in m.flat()]

    def is_mono(self) -> bool:
        return all(m.rank() == m.cols for m in self.maps)

    def is_epi(self) -> bool:
        return all(m.rank() == m.rows for m in self.maps)

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.is_mono()

    def inverse(self) -> "MorphismRep":
        return MorphismRep(self.target, self.source, [m.inverse() for m in self.maps], check=False)


def check_same_quiver(*reps: Rep) -> None:
    qs = {r.quiver for r in reps}
    if len(qs) > 1:
        raise QuiverMismatch("representations live over different quivers")


# -- constructions -----------------------------------------------------------

def zero_rep(quiver: Quiver) -> Rep:
    return Rep(quiver, [0] * quiver.vertex_count)


def identity(M: Rep) -> MorphismRep:
    return MorphismRep(M, M, [Mat.identity(d) for d in M.dims], check=False)


def zero_morphism(M: Rep, N: Rep) -> MorphismRep:
    return MorphismRep(M, N, [Mat(N.dim(v), M.dim(v)) for v in M.quiver.vertices], check=False)


def morphism_from_vector(M: Rep, N: Rep, vec: Sequence) -> MorphismRep:
    maps = []
    pos = 0
    for v in M.quiver.vertices:
        r, c = N.dim(v), M.dim(v)
        maps.append(Mat._raw(r, c, tuple(tuple(q(vec[pos + i * c + j]) for j in range(c)) for i in range(r))))
        pos += r * c
    return MorphismRep(M, N, maps, check=False)


def hom_ambient_dim(M: Rep, N: Rep) -> int:
    return sum(a * b for a, b in zip(M.dims, N.dims))


def direct_sum(reps: Sequence[Rep], quiver: Quiver | None = None) -> Rep:
    if not reps:
        if quiver is None:
            raise ValueError("empty direct sum needs a quiver")
        return zero_rep(quiver)
    check_same_quiver(*reps)
    qv = reps[0].quiver
    dims = [sum(r.dim(v) for r in reps) for v in qv.vertices]
    maps = [block_diag([r.maps[k] for r in reps]) for k in range(len(qv.arrows))]
    return Rep(qv, dims, maps)


def sum_injections(reps: Sequence[Rep], total: Rep) -> list[MorphismRep]:
    out = []
    offs = [0] * total.quiver.vertex_count
    for r in reps:
        maps = []
        for v in total.quiver.vertices:
            d, D, o = r.dim(v), total.dim(v), offs[v - 1]
            maps.append(Mat._raw(D, d, tuple(tuple(ONE if i == o + j else ZERO for j in range(d)) for i in range(D))))
            offs[v - 1] += d
        out.append(MorphismRep(r, total, maps, check=False))
    return out


def sum_projections(reps: Sequence[Rep], total: Rep) -> list[MorphismRep]:
    return [MorphismRep(total, r, [m.T for m in inj.maps], check=False)
            for r, inj in zip(reps, sum_injections(reps, total))]


def morphism_sum(fs: Sequence[MorphismRep]) -> MorphismRep:
    """Diagonal direct sum f_1 + ... + f_k : (+) X_i -> (+) Y_i."""
    X = direct_sum([f.source for f in fs], fs[0].source.quiver if fs else None)
    Y = direct_sum([f.target for f in fs], fs[0].source.quiver if fs else None)
    maps = [block_diag([f.maps[i] for f in fs]) for i in range(X.quiver.vertex_count)]
    return MorphismRep(X, Y, maps, check=False)


def column_morphism(fs: Sequence[MorphismRep], target: Rep | None = None) -> MorphismRep:
    """The map X -> (+) Y_i with components f_i : X -> Y_i."""
    X = fs[0].source
    Y = target if target is not None else direct_sum([f.target for f in fs])
    maps = []
    for i in range(X.quiver.vertex_count):
        m = Mat(0, X.dims[i])
        for f in fs:
            m = m.vstack(f.maps[i])
        maps.append(m)
    return MorphismRep(X, Y, maps, check=False)


def row_morphism(fs: Sequence[MorphismRep], source: Rep | None = None) -> MorphismRep:
    """The map (+) X_i -> Y with components f_i : X_i -> Y."""
    Y = fs[0].target
    X = source if source is not None else direct_sum([f.source for f in fs])
    maps = []
    for i in range(Y.quiver.vertex_count):
        m = Mat(Y.dims[i], 0)
        for f in fs:
            m = m.hstack(f.maps[i])
        maps.append(m)
    return MorphismRep(X, Y, maps, check=False)


# -- Hom spaces ----------------------------------------------------------------

class HomSpace:
    """Hom(M, N) with its canonical basis.

    The basis vectors are the reduced echelon basis of the intertwiner
    solution space, so the coordinates of a morphism are its vector
    entries at the pivot columns.
    """

    def __init__(self, M: Rep, N: Rep):
        check_same_quiver(M, N)
        self.source = M
        self.target = N
        self.ambient = hom_ambient_dim(M, N)
        self.space = Subspace(self.ambient)
        eqs = _intertwiner_equations(M, N)
        self.space.basis = tuple(tuple(v) for v in nullspace(eqs, self.ambient))
        self.space.pivots = tuple(next(j for j, a in enumerate(v) if a) for v in self.space.basis)
        self.basis = [morphism_from_vector(M, N, v) for v in self.space.basis]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, phi: MorphismRep) -> list:
        vec = phi.vector()
        if not self.space.contains(vec):
            raise ValueError("morphism is not an intertwiner between these representations")
        return self.space.coords(vec)

    def element(self, coords: Sequence) -> MorphismRep:
        return morphism_from_vector(self.source, self.target, self.space.element(coords))


def _intertwiner_equations(M: Rep, N: Rep) -> list[list]:
    qv = M.quiver
    offs = {}
    pos = 0
    for v in qv.vertices:
        offs[v] = pos
        pos += N.dim(v) * M.dim(v)
    rows = []
    for k, (_, s, t) in enumerate(qv.arrows):
        Na, Ma = N.maps[k], M.maps[k]
        ms, nt = M.dim(s), N.dim(t)
        ns, mt = N.dim(s), M.dim(t)
        # (N_a phi_s - phi_t M_a)[p][c] = 0 for p < dim N_t, c < dim M_s
        for p in range(nt):
            for c in range(ms):
                row = [ZERO] * pos
                for i in range(ns):
                    a = Na.data[p][i]
                    if a:
                        row[offs[s] + i * ms + c] += a
                for j in range(mt):
                    b = Ma.data[j][c]
                    if b:
                        row[offs[t] + p * mt + j] -= b
                if any(row):
                    rows.append(row)
    return rows


@lru_cache(maxsize=None)
def hom_space(M: Rep, N: Rep) -> HomSpace:
    return HomSpace(M, N)


def hom_basis(M: Rep, N: Rep) -> list[MorphismRep]:
    """Canonically ordered basis of Hom(M, N)."""
    return list(hom_space(M, N).basis)


def hom_dim(M: Rep, N: Rep) -> int:
    return hom_space(M, N).dim


def image_subspace(maps: Sequence[MorphismRep], ambient: int) -> Subspace:
    return Subspace(ambient, [m.vector() for m in maps])


# -- kernels, cokernels, exactness ----------------------------------------------

def _column_basis_of_kernel(m: Mat) -> Mat:
    """Columns spanning ker m (canonical echelon order)."""
    null = nullspace([list(r) for r in m.data], m.cols)
    return Mat(len(null), m.cols, null).T if null else Mat(m.cols, 0)


def _left_inverse(inc: Mat) -> Mat:
    """A left inverse of an injective matrix (solve via echelon form of the transpose)."""
    n, k = inc.shape
    if k == 0:
        return Mat(0, n)
    aug = [list(inc.data[i]) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    red, piv = rref(aug, k + n)
    if piv[:k] != list(range(k)):
        raise ValueError("matrix is not injective")
    return Mat(k, n, [red[i][k:] for i in range(k)])


def _right_inverse(surj: Mat) -> Mat:
    return _left_inverse(surj.T).T


@dataclass(frozen=True)
class KernelCokernel:
    ker: Rep
    ker_map: MorphismRep
    coker: Rep
    coker_map: MorphismRep


def kernel_cokernel(phi: MorphismRep) -> KernelCokernel:
    M, N = phi.source, phi.target
    qv = M.quiver
    incs = [_column_basis_of_kernel(phi.at(v)) for v in qv.vertices]
    lefts = [_left_inverse(i) for i in incs]
    kmaps = [lefts[t - 1] @ M.maps[k] @ incs[s - 1] for k, (_, s, t) in enumerate(qv.arrows)]
    K = Rep(qv, [i.cols for i in incs], kmaps)
    kmap = MorphismRep(K, M, incs)

    projs = []
    for v in qv.vertices:
        m = phi.at(v)
        # rows y with y m = 0 give the quotient map
        null = nullspace([list(r) for r in m.T.data], m.rows) if m.rows else []
        projs.append(Mat(len(null), m.rows, null) if null else Mat(0, m.rows))
    rights = [_right_inverse(p) for p in projs]
    cmaps = [projs[t - 1] @ N.maps[k] @ rights[s - 1] for k, (_, s, t) in enumerate(qv.arrows)]
    C = Rep(qv, [p.rows for p in projs], cmaps)
    cmap = MorphismRep(N, C, projs)
    return KernelCokernel(K, kmap, C, cmap)


def image(phi: MorphismRep) -> tuple[Rep, MorphismRep, MorphismRep]:
    """Factor phi = inc . epi through its image; returns (Im, epi, inc)."""
    kc = kernel_cokernel(phi)
    inc_kc = kernel_cokernel(kc.coker_map)
    im, inc = inc_kc.ker, inc_kc.ker_map
    lefts = [_left_inverse(m) for m in inc.maps]
    epi = MorphismRep(phi.source, im, [l @ p for l, p in zip(lefts, phi.maps)])
    return im, epi, inc


def is_kernel_cokernel_pair(f: MorphismRep, g: MorphismRep) -> bool:
    if g.source != f.target:
        raise ValueError("g.source must equal f.target")
    if not (g @ f).is_zero():
        return False
    for v in f.source.quiver.vertices:
        fv, gv = f.at(v), g.at(v)
        if fv.rank() != fv.cols or gv.rank() != gv.rows:
            return False
        if f.target.dim(v) != f.source.dim(v) + g.target.dim(v):
            return False
    return True


@dataclass(frozen=True)
class Conflation:
    mono: MorphismRep
    epi: MorphismRep

    def __post_init__(self):
        if not is_kernel_cokernel_pair(self.mono, self.epi):
            raise ValueError("not a kernel-cokernel pair")

    @property
    def left(self) -> Rep:
        return self.mono.source

    @property
    def middle(self) -> Rep:
        return self.mono.target

    @property
    def right(self) -> Rep:
        return self.epi.target


def conflation_sum(cs: Sequence[Conflation], quiver: Quiver) -> Conflation:
    if not cs:
        z = zero_rep(quiver)
        return Conflation(identity(z), identity(z))
    return Conflation(morphism_sum([c.mono for c in cs]), morphism_sum([c.epi for c in cs]))


# -- endomorphisms and indecomposability ------------------------------------------

def _trace(phi: MorphismRep) -> object:
    return sum((m.data[i][i] for m in phi.maps for i in range(m.rows)), ZERO)


def radical_of_endomorphisms(M: Rep) -> Subspace:
    """rad End(M) in the coordinates of hom_space(M, M).

    This is the radical of the trace form (x, y) -> tr(xy), which equals
    the Jacobson radical of End(M) in characteristic zero.
    """
    H = hom_space(M, M)
    b = H.basis
    gram = [[_trace(x @ y) for y in b] for x in b]
    return Subspace(H.dim, nullspace(gram, H.dim))


def is_indecomposable(M: Rep) -> bool:
    if M.is_zero():
        raise ValueError("the zero representation is not a valid input")
    H = hom_space(M, M)
    return H.dim - radical_of_endomorphisms(M).dim == 1


# -- extensions ------------------------------------------------------------------

class ExtPresentation:
    """Ext^1(X, Y) for a path algebra: cocycles modulo coboundaries.

    A cocycle is one matrix zeta_a : X_{s(a)} -> Y_{t(a)} per arrow, vectorised
    arrow by arrow.  Coboundaries are the image of
    (phi_v) |-> (Y_a phi_s - phi_t X_a).
    """

    def __init__(self, X: Rep, Y: Rep):
        check_same_quiver(X, Y)
        self.X, self.Y = X, Y
        qv = X.quiver
        self.shapes = [(Y.dim(t), X.dim(s)) for _, s, t in qv.arrows]
        self.ambient = sum(r * c for r, c in self.shapes)
        cob = []
        for v in qv.vertices:
            for i in range(Y.dim(v)):
                for j in range(X.dim(v)):
                    maps = []
                    for w in qv.vertices:
                        m = [[ZERO] * X.dim(w) for _ in range(Y.dim(w))]
                        if w == v:
                            m[i][j] = ONE
                        maps.append(Mat(Y.dim(w), X.dim(w), m))
                    cob.append(self._vec(self._coboundary(maps)))
        self.coboundaries = Subspace(self.ambient, cob)
        piv = set(self.coboundaries.pivots)
        self.free_columns = [j for j in range(self.ambient) if j not in piv]
        self.basis = []
        for j in self.free_columns:
            v = [ZERO] * self.ambient
            v[j] = ONE
            self.basis.append(self.unvec(v))

    @property
    def dim(self) -> int:
        return len(self.free_columns)

    def _coboundary(self, vmaps: Sequence[Mat]) -> list[Mat]:
        out = []
        for k, (_, s, t) in enumerate(self.X.quiver.arrows):
            out.append(self.Y.maps[k] @ vmaps[s - 1] - vmaps[t - 1] @ self.X.maps[k])
        return out

    def coboundary(self, vmaps: Sequence[Mat]) -> list[Mat]:
        return self._coboundary(vmaps)

    @staticmethod
    def _vec(mats: Sequence[Mat]) -> list:
        return [a for m in mats for a in m.flat()]

    def unvec(self, vec: Sequence) -> tuple[Mat, ...]:
        out = []
        pos = 0
        for r, c in self.shapes:
            out.append(Mat(r, c, [[vec[pos + i * c + j] for j in range(c)] for i in range(r)]))
            pos += r * c
        return tuple(out)

    def class_of(self, cocycle: Sequence[Mat]) -> list:
        """Coordinates of a cocycle's class in the basis ``self.basis``."""
        vec = self._vec(cocycle)
        w = self.coboundaries.reduce(vec)
        return [w[j] for j in self.free_columns]

    def cocycle(self, coords: Sequence) -> tuple[Mat, ...]:
        v = [ZERO] * self.ambient
        for c, j in zip(coords, self.free_columns):
            v[j] = q(c)
        return self.unvec(v)

    def is_trivial(self, cocycle: Sequence[Mat]) -> bool:
        return not any(self.class_of(cocycle))


@lru_cache(maxsize=None)
def ext_space(X: Rep, Y: Rep) -> ExtPresentation:
    return ExtPresentation(X, Y)


def realize_extension(zeta: Sequence[Mat], X: Rep, Y: Rep) -> Conflation:
    """0 -> Y -> E -> X -> 0 with E_v = Y_v (+) X_v and off-diagonal blocks zeta_a."""
    check_same_quiver(X, Y)
    qv = X.quiver
    maps = []
    for k, (_, s, t) in enumerate(qv.arrows):
        z = zeta[k]
        if z.shape != (Y.dim(t), X.dim(s)):
            raise ValueError(f"cocycle block for arrow {qv.arrows[k][0]} has shape {z.shape}")
        maps.append(block([[Y.maps[k], z], [Mat(X.dim(t), Y.dim(s)), X.maps[k]]]))
    E = Rep(qv, [Y.dim(v) + X.dim(v) for v in qv.vertices], maps)
    mono = MorphismRep(Y, E,
                       [Mat.identity(Y.dim(v)).vstack(Mat(X.dim(v), Y.dim(v))) for v in qv.vertices])
    epi = MorphismRep(E, X, [Mat(X.dim(v), Y.dim(v)).hstack(Mat.identity(X.dim(v))) for v in qv.vertices])
    return Conflation(mono, epi)


def extension_class(c: Conflation) -> tuple[Mat, ...]:
    """A cocycle representing the class of 0 -> Y -> E -> X -> 0."""
    f, g = c.mono, c.epi
    qv = f.source.quiver
    sections, retractions = [], []
    for v in qv.vertices:
        gv, fv = g.at(v), f.at(v)
        sec = _right_inverse(gv)
        # retraction r with r f = 1 and r sec = 0
        both = fv.hstack(sec)
        inv = both.inverse() if both.rows else Mat(0, 0)
        retractions.append(Mat(fv.cols, both.rows, inv.data[:fv.cols]) if both.rows else Mat(0, 0))
        sections.append(sec)
    out = []
    for k, (_, s, t) in enumerate(qv.arrows):
        out.append(retractions[t - 1] @ c.middle.maps[k] @ sections[s - 1])
    return tuple(out)


def pushforward_ext(phi: MorphismRep, cocycle: Sequence[Mat]) -> tuple[Mat, ...]:
    """phi_*(zeta): zeta_a |-> phi_{t(a)} zeta_a."""
    qv = phi.source.quiver
    return tuple(phi.at(t) @ cocycle[k] for k, (_, s, t) in enumerate(qv.arrows))


def pullback_ext(psi: MorphismRep, cocycle: Sequence[Mat]) -> tuple[Mat, ...]:
    """psi^*(zeta): zeta_a |-> zeta_a psi_{s(a)}."""
    qv = psi.source.quiver
    return tuple(cocycle[k] @ psi.at(s) for k, (_, s, t) in enumerate(qv.arrows))


def pushout(f: MorphismRep, h: MorphismRep) -> tuple[Rep, MorphismRep, MorphismRep]:
    """Pushout of Y <-f- X -h-> Z as the cokernel of (f, -h): X -> Y (+) Z."""
    if f.source != h.source:
        raise ValueError("pushout needs a common source")
    Y, Z = f.target, h.target
    S = direct_sum([Y, Z])
    col = column_morphism([f, h.scale(-1)], S)
    kc = kernel_cokernel(col)
    iy, iz = sum_injections([Y, Z], S)
    return kc.coker, kc.coker_map @ iy, kc.coker_map @ iz


def split_retraction(f: MorphismRep) -> MorphismRep | None:
    """A morphism r with r f = 1, if f is a split monomorphism."""
    X, Y = f.source, f.target
    H = hom_space(Y, X)
    target = identity(X).vector()
    cols = [(b @ f).vector() for b in H.basis]
    n = len(target)
    if not cols:
        return None if any(target) else zero_morphism(Y, X)
    system = [[c[i] for c in cols] for i in range(n)]
    x = solve(system, target, len(cols))
    if x is None:
        return None
    return _combine(H.basis, x)


def _combine(basis: Sequence[MorphismRep], coeffs: Sequence) -> MorphismRep:
    out = None
    for b, c in zip(basis, coeffs):
        c = q(c)
        if not c:
            continue
        term = b.scale(c)
        out = term if out is None else out + term
    return out if out is not None else zero_morphism(basis[0].source, basis[0].target)


def combine(basis: Sequence[MorphismRep], coeffs: Sequence, source: Rep, target: Rep) -> MorphismRep:
    if not basis:
        return zero_morphism(source, target)
    return _combine(basis, coeffs)


def socle_inclusion(M: Rep) -> MorphismRep:
    """soc M -> M: at each vertex the common kernel of the outgoing arrows."""
    qv = M.quiver
    incs = []
    for v in qv.vertices:
        outs = [M.maps[k] for k, (_, s, _t) in enumerate(qv.arrows) if s == v]
        stacked = Mat(0, M.dim(v))
        for m in outs:
            stacked = stacked.vstack(m)
        incs.append(_column_basis_of_kernel(stacked))
    soc = Rep(qv, [i.cols for i in incs])
    return MorphismRep(soc, M, incs)


def rank_of_maps(maps: Sequence[MorphismRep], ambient: int) -> int:
    return rank([m.vector() for m in maps], ambient)


def factor_through_left(phi: MorphismRep, a: MorphismRep,
                        allowed: Sequence[MorphismRep] | None = None) -> MorphismRep | None:
    """Some b with b @ a == phi, drawn from span(allowed) (default: all of Hom)."""
    if phi.source != a.source:
        raise ValueError("phi and a need a common source")
    cands = list(allowed) if allowed is not None else hom_basis(a.target, phi.target)
    return _solve_combination([(b @ a).vector() for b in cands], phi.vector(), cands,
                              a.target, phi.target)


def factor_through_right(phi: MorphismRep, c: MorphismRep,
                         allowed: Sequence[MorphismRep] | None = None) -> MorphismRep | None:
    """Some h with c @ h == phi, drawn from span(allowed) (default: all of Hom)."""
    if phi.target != c.target:
        raise ValueError("phi and c need a common target")
    cands = list(allowed) if allowed is not None else hom_basis(phi.source, c.source)
    return _solve_combination([(c @ h).vector() for h in cands], phi.vector(), cands,
                              phi.source, c.source)


def _solve_combination(cols, target, cands, src, tgt):
    n = len(target)
    if not cols:
        return None if any(target) else zero_morphism(src, tgt)
    system = [[c[i] for c in cols] for i in range(n)]
    x = solve(system, list(target), len(cols))
    if x is None:
        return None
    return combine(cands, x, src, tgt)

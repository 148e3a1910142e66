"""Auslander-Reiten quivers of Dynkin quivers by knitting from the projectives."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Sequence

from .linalg import ONE, ZERO, Mat, q, rref
from .repcore import (
    Conflation,
    MorphismRep,
    Quiver,
    QuiverMismatch,
    Rep,
    column_morphism,
    direct_sum,
    hom_basis,
    identity,
    is_indecomposable,
    kernel_cokernel,
    row_morphism,
    socle_inclusion,
    sum_injections,
    sum_projections,
)


class NotDynkin(ValueError):
    pass


@dataclass
class Indec:
    id: str
    rep: Rep
    is_projective: bool = False
    is_injective: bool = False
    tau: str | None = None
    tau_inv: str | None = None

    @property
    def dims(self):
        return self.rep.dims


@dataclass
class ARData:
    quiver: Quiver
    indecs: list[Indec]
    irreducible_maps: list[tuple[str, str, MorphismRep]]
    ar_sequences: list[Conflation]
    dynkin_type: str = ""
    # id of tau Z -> (AR sequence, successor ids in the order of the middle summands)
    sequence_at: dict[str, tuple[Conflation, list[str]]] = field(default_factory=dict)
    by_id: dict[str, Indec] = field(default_factory=dict)

    def __post_init__(self):
        self.by_id = {m.id: m for m in self.indecs}

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other

    @property
    def ids(self) -> list[str]:
        return [m.id for m in self.indecs]

    def __getitem__(self, mid: str) -> Indec:
        try:
            return self.by_id[mid]
        except KeyError:
            raise KeyError(f"unknown indecomposable id {mid!r}") from None

    def rep(self, mid: str) -> Rep:
        return self[mid].rep

    def check_id(self, mid: str) -> str:
        self[mid]
        return mid

    @property
    def injectives(self) -> frozenset[str]:
        return frozenset(m.id for m in self.indecs if m.is_injective)

    @property
    def projectives(self) -> frozenset[str]:
        return frozenset(m.id for m in self.indecs if m.is_projective)

    def by_dims(self, dims: Sequence[int]) -> str:
        """Id of the unique indecomposable with this dimension vector (Dynkin only)."""
        dims = tuple(dims)
        hits = [m.id for m in self.indecs if m.dims == dims]
        if len(hits) != 1:
            raise KeyError(f"no unique indecomposable with dimension vector {dims}")
        return hits[0]

    def tau(self, mid: str) -> str | None:
        return self[mid].tau

    def tau_inv(self, mid: str) -> str | None:
        return self[mid].tau_inv

    def ar_sequence_starting(self, mid: str) -> Conflation:
        if mid not in self.sequence_at:
            raise ValueError(f"{mid} is injective: no almost split sequence starts there")
        return self.sequence_at[mid][0]

    def ar_sequence_ending(self, mid: str) -> Conflation:
        t = self[mid].tau
        if t is None:
            raise ValueError(f"{mid} is projective: no almost split sequence ends there")
        return self.sequence_at[t][0]

    def sort_ids(self, ids) -> list[str]:
        order = {m: i for i, m in enumerate(self.ids)}
        return sorted(ids, key=order.__getitem__)


# -- Dynkin recognition -------------------------------------------------------

def dynkin_type(quiver: Quiver) -> str:
    n = quiver.vertex_count
    adj: dict[int, list[int]] = {v: [] for v in quiver.vertices}
    for _, s, t in quiver.arrows:
        if s == t:
            raise NotDynkin("non-Dynkin quiver: graph has a loop")
        adj[s].append(t)
        adj[t].append(s)
    seen = {1}
    stack = [1]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != n:
        raise NotDynkin("non-Dynkin quiver: underlying graph is disconnected")
    if len(quiver.arrows) != n - 1:
        kind = "Kronecker (double edge)" if n == 2 else "cyclic (extended type A)"
        raise NotDynkin(f"non-Dynkin quiver: underlying graph is {kind}")
    branch = [v for v in quiver.vertices if len(adj[v]) >= 3]
    if not branch:
        return f"A{n}"
    if len(branch) > 1:
        raise NotDynkin(f"non-Dynkin quiver: tree with {len(branch)} branch points (extended type D or wild)")
    c = branch[0]
    if len(adj[c]) > 3:
        raise NotDynkin(f"non-Dynkin quiver: star with {len(adj[c])} arms")
    arms = []
    for w in adj[c]:
        length, prev, cur = 1, c, w
        while True:
            nxt = [x for x in adj[cur] if x != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length + 1)
    p, qq, r = sorted(arms)
    if p == 2 and qq == 2:
        return f"D{n}"
    if (p, qq) == (2, 3) and r in (3, 4, 5):
        return f"E{n}"
    names = {(3, 3, 3): "extended E6", (2, 4, 4): "extended E7", (2, 3, 6): "extended E8"}
    raise NotDynkin(f"non-Dynkin quiver: tree with arms {(p, qq, r)} ({names.get((p, qq, r), 'wild')})")


def positive_root_count(kind: str) -> int:
    n = int(kind[1:])
    return {"A": n * (n + 1) // 2, "D": n * (n - 1), "E": {6: 36, 7: 63, 8: 120}.get(n, 0)}[kind[0]]


# -- projectives and injectives ---------------------------------------------------

def _paths(quiver: Quiver, start: int, forward: bool) -> dict[int, list[tuple[str, ...]]]:
    """Paths from ``start`` (or into it when not forward), keyed by the far end."""
    out = {v: [] for v in quiver.vertices}
    out[start].append(())
    frontier = [((), start)]
    while frontier:
        nxt = []
        for path, v in frontier:
            for name, s, t in quiver.arrows:
                if forward and s == v:
                    p = path + (name,)
                    out[t].append(p)
                    nxt.append((p, t))
                elif not forward and t == v:
                    p = (name,) + path
                    out[s].append(p)
                    nxt.append((p, s))
        frontier = nxt
    return out


def projective(quiver: Quiver, v: int) -> tuple[Rep, dict]:
    """P_v(w) has basis the paths v -> w; arrows act by appending."""
    paths = _paths(quiver, v, True)
    maps = []
    for name, s, t in quiver.arrows:
        m = [[ZERO] * len(paths[s]) for _ in paths[t]]
        for j, p in enumerate(paths[s]):
            m[paths[t].index(p + (name,))][j] = ONE
        maps.append(Mat(len(paths[t]), len(paths[s]), m))
    return Rep(quiver, [len(paths[w]) for w in quiver.vertices], maps), paths


def injective(quiver: Quiver, v: int) -> Rep:
    """I_v(w) has basis the paths w -> v; an arrow sends a path to its tail after that arrow."""
    paths = _paths(quiver, v, False)
    maps = []
    for name, s, t in quiver.arrows:
        m = [[ZERO] * len(paths[s]) for _ in paths[t]]
        for j, p in enumerate(paths[s]):
            if p and p[0] == name:
                m[paths[t].index(p[1:])][j] = ONE
        maps.append(Mat(len(paths[t]), len(paths[s]), m))
    return Rep(quiver, [len(paths[w]) for w in quiver.vertices], maps)


def _projective_inclusion(quiver, arrow, Pw, pw_paths, Pv, pv_paths) -> MorphismRep:
    """P_w -> P_v for an arrow v -> w: prefix every path with the arrow."""
    maps = []
    for x in quiver.vertices:
        m = [[ZERO] * len(pw_paths[x]) for _ in pv_paths[x]]
        for j, p in enumerate(pw_paths[x]):
            m[pv_paths[x].index((arrow,) + p)][j] = ONE
        maps.append(Mat(len(pv_paths[x]), len(pw_paths[x]), m))
    return MorphismRep(Pw, Pv, maps)


# -- knitting -----------------------------------------------------------------------

@lru_cache(maxsize=None)
def knit(quiver: Quiver) -> ARData:
    kind = dynkin_type(quiver)
    order = quiver.topological_order()
    reps: list[Rep] = []
    preds: list[list[tuple[int, MorphismRep]]] = []
    proj_of: dict[int, int] = {}
    paths = {}
    for v in order:
        P, pp = projective(quiver, v)
        proj_of[v] = len(reps)
        paths[v] = pp
        reps.append(P)
        preds.append([])
    incl = {}
    for name, v, w in quiver.arrows:
        f = _projective_inclusion(quiver, name, reps[proj_of[w]], paths[w], reps[proj_of[v]], paths[v])
        incl[(proj_of[w], proj_of[v])] = f
        preds[proj_of[v]].append((proj_of[w], f))

    # successors discovered so far: index -> list of (succ index, map)
    succ: dict[int, list[tuple[int, MorphismRep]]] = {}
    tau_inv: dict[int, int] = {}
    sequences: dict[int, tuple[Conflation, list[int]]] = {}
    injective_idx: set[int] = set()
    done: set[int] = set()
    expected = positive_root_count(kind)

    while len(done) < len(reps):
        ready = [k for k in range(len(reps)) if k not in done and all(j in done for j, _ in preds[k])]
        if not ready:
            raise RuntimeError("knitting stalled")
        k = min(ready, key=lambda i: (reps[i].dims, i))
        outs: list[tuple[int, MorphismRep]] = []
        for j, _ in preds[k]:
            if j in tau_inv:
                seq, mids = sequences[j]
                pos = mids.index(k)
                t = tau_inv[j]
                comp = seq.epi @ sum_injections([reps[m] for m in mids], seq.middle)[pos]
                outs.append((t, comp))
        for (src, tgt), f in incl.items():
            if src == k:
                outs.append((tgt, f))
        outs.sort(key=lambda e: e[0])
        succ[k] = outs
        done.add(k)
        if outs:
            mid_reps = [reps[i] for i, _ in outs]
            E = direct_sum(mid_reps)
            f = column_morphism([m for _, m in outs], E)
            if f.is_mono():
                kc = kernel_cokernel(f)
                if not kc.coker.is_zero():
                    new = len(reps)
                    reps.append(kc.coker)
                    g = kc.coker_map
                    injs = sum_injections(mid_reps, E)
                    preds.append([(i, g @ inj) for (i, _), inj in zip(outs, injs)])
                    tau_inv[k] = new
                    sequences[k] = (Conflation(f, g), [i for i, _ in outs])
                    if len(reps) > expected:
                        raise RuntimeError("knitting produced too many indecomposables")
                    continue
        injective_idx.add(k)

    if len(reps) != expected:
        raise RuntimeError(f"knitting found {len(reps)} indecomposables, expected {expected}")
    inj_dims = sorted(injective(quiver, v).dims for v in quiver.vertices)
    if sorted(reps[i].dims for i in injective_idx) != inj_dims:
        raise RuntimeError("injective indecomposables do not match the quiver's injectives")

    ids = [f"m{i}" for i in range(len(reps))]
    tau = {v: k for k, v in tau_inv.items()}
    indecs = []
    for i, R in enumerate(reps):
        indecs.append(Indec(ids[i], R, is_projective=i < quiver.vertex_count,
                            is_injective=i in injective_idx,
                            tau=ids[tau[i]] if i in tau else None,
                            tau_inv=ids[tau_inv[i]] if i in tau_inv else None))
    irr = [(ids[k], ids[t], m) for k in sorted(succ) for t, m in succ[k]]
    seqs = [sequences[k][0] for k in sorted(sequences)]
    ar = ARData(quiver, indecs, irr, seqs, dynkin_type=kind)
    ar.sequence_at = {ids[k]: (c, [ids[i] for i in mids]) for k, (c, mids) in sequences.items()}
    return ar


def dynkin_quiver(kind: str, orientation: Sequence[int] | None = None) -> Quiver:
    """Standard labelled Dynkin quivers.

    A_n is the path 1 - 2 - ... - n; D_n has the branch vertex n-2 joined to
    n-1 and n; E_n has the branch vertex 3 with the short arm 3 - n.  Edges
    point from the smaller to the larger label unless ``orientation`` has a
    ``-1`` at that edge's position.
    """
    n = int(kind[1:])
    t = kind[0].upper()
    if t == "A":
        edges = [(i, i + 1) for i in range(1, n)]
    elif t == "D":
        edges = [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)]
    elif t == "E":
        edges = [(i, i + 1) for i in range(1, n - 1)] + [(3, n)]
    else:
        raise ValueError(f"unknown Dynkin type {kind}")
    orientation = list(orientation or [1] * len(edges))
    arrows = []
    for k, ((a, b), o) in enumerate(zip(edges, orientation)):
        s, tt = (a, b) if o > 0 else (b, a)
        arrows.append((f"a{k + 1}", s, tt))
    return Quiver(n, arrows)


# -- classification and decomposition ----------------------------------------------

def _scalar_part(phi: MorphismRep) -> object:
    """For phi in a local End(N) with residue field Q: the scalar c with phi - c*1 nilpotent."""
    total = phi.source.total_dim
    tr = sum((m.data[i][i] for m in phi.maps for i in range(m.rows)), ZERO)
    return tr / total


def _coefficient_trials(k: int):
    yield from ([ONE if i == j else ZERO for i in range(k)] for j in range(k))
    for c in product(range(1, 4), repeat=min(k, 4)):
        yield [q(x) for x in c] + [ONE] * (k - len(c))


def find_isomorphism(M: Rep, N: Rep) -> MorphismRep | None:
    if M.dims != N.dims:
        return None
    basis = hom_basis(M, N)
    for coeffs in _coefficient_trials(len(basis)):
        phi = None
        for b, c in zip(basis, coeffs):
            if c:
                term = b.scale(c)
                phi = term if phi is None else phi + term
        if phi is not None and phi.is_iso():
            return phi
    return None


def classify(M: Rep, ar: ARData) -> tuple[str, MorphismRep]:
    """The indecomposable isomorphic to M with an isomorphism M -> ar.rep(id)."""
    if M.quiver != ar.quiver:
        raise QuiverMismatch("representation is not over this quiver")
    if M.is_zero() or not is_indecomposable(M):
        raise ValueError("representation is decomposable")
    for ind in ar.indecs:
        if ind.dims == M.dims:
            iso = find_isomorphism(M, ind.rep)
            if iso is not None:
                return ind.id, iso
    raise ValueError(f"no indecomposable matches dimension vector {M.dims}")


def decompose(ar: ARData, M: Rep) -> list[tuple[str, MorphismRep, MorphismRep]]:
    """Split M into indecomposables.

    Returns triples (id, i, p) with i: N -> M, p: M -> N such that
    sum i p = 1_M and p i = 1_N for matching entries, p_k i_l = 0 otherwise.
    """
    if M.quiver != ar.quiver:
        raise QuiverMismatch("representation is not over this quiver")
    if M.is_zero():
        return []
    embeds: list[tuple[str, MorphismRep]] = []
    projs: list[MorphismRep] = []
    for ind in ar.indecs:
        N = ind.rep
        if any(a > b for a, b in zip(N.dims, M.dims)):
            continue
        Phi = hom_basis(N, M)
        Psi = hom_basis(M, N)
        if not Phi or not Psi:
            continue
        B = [[_scalar_part(psi @ phi) for psi in Psi] for phi in Phi]
        rows, cols = _independent_block(B)
        if not rows:
            continue
        sub = Mat(len(rows), len(cols), [[B[i][j] for j in cols] for i in rows]).inverse()
        for k, i in enumerate(rows):
            psi = None
            for jj, j in enumerate(cols):
                c = sub.data[jj][k]
                if c:
                    term = Psi[j].scale(c)
                    psi = term if psi is None else psi + term
            embeds.append((ind.id, Phi[i]))
            projs.append(psi)
    reps = [ar.rep(i) for i, _ in embeds]
    S = direct_sum(reps, M.quiver)
    if S.dims != M.dims:
        raise RuntimeError("decomposition does not account for the whole module")
    Phi = row_morphism([e for _, e in embeds], S)
    Psi = column_morphism(projs, S)
    # Psi Phi = 1 + radical, hence invertible; correct the projections
    phi_inv = (Psi @ Phi).inverse() @ Psi
    if not (phi_inv @ Phi) == identity(S):
        raise RuntimeError("decomposition witness is not an isomorphism")
    pis = sum_projections(reps, S)
    injs = sum_injections(reps, S)
    return [(i, Phi @ inj, pr @ phi_inv) for (i, _), inj, pr in zip(embeds, injs, pis)]


def _independent_block(B):
    """Row and column indices of a maximal invertible square submatrix."""
    if not B or not B[0]:
        return [], []
    m, n = len(B), len(B[0])
    _, cols = rref([list(r) for r in B], n)
    if not cols:
        return [], []
    _, rows = rref([[B[i][j] for i in range(m)] for j in cols], m)
    return rows, cols


def left_almost_split_map(ar: ARData, mid: str) -> MorphismRep:
    ind = ar[mid]
    if not ind.is_injective:
        return ar.ar_sequence_starting(mid).mono
    return kernel_cokernel(socle_inclusion(ind.rep)).coker_map


def ar_dot(ar: ARData) -> str:
    lines = ["digraph AR {", "  rankdir=LR;"]
    for m in ar.indecs:
        flags = []
        if m.is_projective:
            flags.append("P")
        if m.is_injective:
            flags.append("I")
        tag = f" {''.join(flags)}" if flags else ""
        dims = "".join(str(d) for d in m.dims)
        lines.append(f'  {m.id} [label="{m.id}\\n{dims}{tag}"];')
    for s, t, _ in ar.irreducible_maps:
        lines.append(f"  {s} -> {t};")
    for m in ar.indecs:
        if m.tau is not None:
            lines.append(f"  {m.id} -> {m.tau} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"

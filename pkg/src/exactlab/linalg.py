"""Exact linear algebra over the rationals.

Everything here works on plain Python sequences of ``mpq`` scalars.  The
elimination routines skip zero entries, which matters because the
intertwiner systems built in :mod:`exactlab.repcore` are very sparse.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from gmpy2 import mpq

Scalar = mpq
ZERO = mpq(0)
ONE = mpq(1)


def q(x) -> mpq:
    """Coerce ints, strings like ``"3/4"`` and Fractions to an exact scalar."""
    if isinstance(x, str):
        return mpq(x.strip())
    return mpq(x)


class Mat:
    """Immutable rows x cols matrix of exact rationals.

    Shape is stored explicitly so 0 x n and n x 0 matrices keep their
    column/row counts.
    """

    __slots__ = ("rows", "cols", "data", "_hash")

    def __init__(self, rows: int, cols: int, data: Iterable[Iterable] | None = None):
        self.rows = rows
        self.cols = cols
        if data is None:
            self.data = tuple((ZERO,) * cols for _ in range(rows))
        else:
            self.data = tuple(tuple(q(x) for x in row) for row in data)
            if len(self.data) != rows or any(len(r) != cols for r in self.data):
                raise ValueError(f"entry grid does not match shape {rows}x{cols}")
        self._hash = None

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Mat":
        rows = list(rows)
        if cols is None:
            if not rows:
                raise ValueError("column count needed for a matrix without rows")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def _raw(cls, rows: int, cols: int, data: tuple) -> "Mat":
        m = cls.__new__(cls)
        m.rows, m.cols, m.data, m._hash = rows, cols, data, None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls._raw(n, n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self.data == other.data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.data))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"Mat({self.rows}x{self.cols}: [{body}])"

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return Mat._raw(self.rows, self.cols,
                        tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __sub__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return Mat._raw(self.rows, self.cols,
                        tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __neg__(self) -> "Mat":
        return Mat._raw(self.rows, self.cols, tuple(tuple(-a for a in r) for r in self.data))

    def scale(self, c) -> "Mat":
        c = q(c)
        return Mat._raw(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.data))

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = list(zip(*other.data)) if other.rows else [()] * other.cols
        out = []
        for r in self.data:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append(tuple(sum((a * col[k] for k, a in nz), ZERO) for col in ocols))
        return Mat._raw(self.rows, other.cols, tuple(out))

    @property
    def T(self) -> "Mat":
        if self.rows == 0:
            return Mat(self.cols, 0)
        return Mat._raw(self.cols, self.rows, tuple(zip(*self.data)))

    def is_zero(self) -> bool:
        return all(not a for r in self.data for a in r)

    def rank(self) -> int:
        return rank([list(r) for r in self.data], self.cols)

    def flat(self) -> list:
        return [a for r in self.data for a in r]

    def inverse(self) -> "Mat":
        if self.rows != self.cols:
            raise ValueError("only square matrices are invertible")
        n = self.rows
        aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self.data)]
        red, piv = rref(aug, 2 * n)
        if piv[:n] != list(range(n)) or len([p for p in piv if p < n]) != n:
            raise ValueError("matrix is singular")
        return Mat._raw(n, n, tuple(tuple(red[i][n:]) for i in range(n)))

    def hstack(self, other: "Mat") -> "Mat":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return Mat._raw(self.rows, self.cols + other.cols,
                        tuple(a + b for a, b in zip(self.data, other.data)))

    def vstack(self, other: "Mat") -> "Mat":
        if self.cols != other.cols:
            raise ValueError("column mismatch in vstack")
        return Mat._raw(self.rows + other.rows, self.cols, self.data + other.data)

    def to_lists(self) -> list[list[str]]:
        return [[str(a) for a in r] for r in self.data]


def block_diag(blocks: Sequence[Mat]) -> Mat:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = []
    c0 = 0
    for b in blocks:
        for r in b.data:
            out.append((ZERO,) * c0 + r + (ZERO,) * (cols - c0 - b.cols))
        c0 += b.cols
    return Mat._raw(rows, cols, tuple(out))


def block(grid: Sequence[Sequence[Mat]]) -> Mat:
    """Assemble a block matrix; every block in a row shares its row count."""
    out: list[tuple] = []
    cols = sum(b.cols for b in grid[0]) if grid else 0
    for brow in grid:
        h = brow[0].rows
        for i in range(h):
            out.append(tuple(a for b in brow for a in b.data[i]))
    return Mat._raw(len(out), cols, tuple(out))


# -- elimination -----------------------------------------------------------

def rref(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form.  Mutates and returns the nonzero rows.

    Returns ``(reduced_rows, pivot_columns)``.
    """
    rows = [r for r in rows if any(r)]
    pivots: list[int] = []
    prow = 0
    for c in range(ncols):
        if prow == len(rows):
            break
        sel = None
        for r in range(prow, len(rows)):
            if rows[r][c]:
                sel = r
                break
        if sel is None:
            continue
        rows[prow], rows[sel] = rows[sel], rows[prow]
        p = rows[prow]
        inv = ONE / p[c]
        if inv != ONE:
            for j in range(c, ncols):
                if p[j]:
                    p[j] *= inv
        nz = [j for j in range(c, ncols) if p[j]]
        for r in range(len(rows)):
            if r != prow:
                row = rows[r]
                f = row[c]
                if f:
                    for j in nz:
                        row[j] -= f * p[j]
        pivots.append(c)
        prow += 1
    return rows[:prow], pivots


def rank(rows: list[list], ncols: int) -> int:
    return len(rref([list(r) for r in rows], ncols)[1])


def nullspace(rows: list[list], ncols: int) -> list[list]:
    """Basis of {x : A x = 0} in reduced row echelon form."""
    red, piv = rref([list(r) for r in rows], ncols)
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for i, pc in enumerate(piv):
            if red[i][f]:
                v[pc] = -red[i][f]
        basis.append(v)
    return rref(basis, ncols)[0]


def solve(rows: list[list], rhs: list, ncols: int) -> list | None:
    """One solution of A x = b, or None when the system is inconsistent."""
    aug = [list(r) + [q(b)] for r, b in zip(rows, rhs)]
    red, piv = rref(aug, ncols + 1)
    if piv and piv[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for i, pc in enumerate(piv):
        x[pc] = red[i][ncols]
    return x


class Subspace:
    """A subspace of Q^n stored by its canonical reduced echelon basis."""

    __slots__ = ("ambient_dim", "basis", "pivots", "_hash")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        self.ambient_dim = ambient_dim
        vecs = [[q(x) for x in v] for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        red, piv = rref(vecs, ambient_dim)
        self.basis = tuple(tuple(r) for r in red)
        self.pivots = tuple(piv)
        self._hash = None

    @classmethod
    def full(cls, n: int) -> "Subspace":
        s = cls(n)
        s.basis = tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))
        s.pivots = tuple(range(n))
        return s

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient_dim, self.basis))
        return self._hash

    def __repr__(self):
        return f"Subspace(dim={self.dim} in Q^{self.ambient_dim})"

    def reduce(self, v: Sequence) -> list:
        """Residual of v after clearing the pivot columns."""
        w = [q(x) for x in v]
        for row, pc in zip(self.basis, self.pivots):
            f = w[pc]
            if f:
                for j in range(pc, self.ambient_dim):
                    if row[j]:
                        w[j] -= f * row[j]
        return w

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def coords(self, v: Sequence) -> list:
        """Coordinates of v (assumed inside) with respect to the canonical basis."""
        return [q(v[pc]) for pc in self.pivots]

    def quotient_coords(self, v: Sequence) -> list:
        """Coordinates of v modulo self, read on the non-pivot columns."""
        w = self.reduce(v)
        piv = set(self.pivots)
        return [w[j] for j in range(self.ambient_dim) if j not in piv]

    def element(self, coords: Sequence) -> list:
        v = [ZERO] * self.ambient_dim
        for c, row in zip(coords, self.basis):
            c = q(c)
            if c:
                for j, a in enumerate(row):
                    if a:
                        v[j] += c * a
        return v

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return Subspace(self.ambient_dim, list(self.basis) + list(other.basis))

    def __and__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        if not self.basis or not other.basis:
            return Subspace(self.ambient_dim)
        k = len(self.basis)
        # columns are basis vectors of both spaces; (a, b) with aB1 + bB2 = 0
        cols = list(self.basis) + list(other.basis)
        system = [[cols[i][j] for i in range(len(cols))] for j in range(self.ambient_dim)]
        null = nullspace(system, len(cols))
        return Subspace(self.ambient_dim, [self.element(v[:k]) for v in null])

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim


def span(n: int, vectors: Iterable[Sequence]) -> Subspace:
    return Subspace(n, vectors)

"""Exact linear algebra over the integers.

Everything downstream (presented abelian groups, cochain complexes, Sha
kernels) reduces to the routines in this module: Smith normal form with
unimodular transforms, canonical Hermite-form row bases of lattices,
kernels of lattice maps, and exact triangular solving.

Conventions:

* matrices act on column vectors; ``m.col(j)`` is the image of the j-th
  standard basis vector,
* a *lattice* is passed around as a tuple of row vectors, normally in
  canonical Hermite normal form: pivots positive, strictly increasing
  pivot columns, entries above a pivot reduced into ``[0, pivot)``, no
  zero rows,
* all arithmetic is on Python's arbitrary-precision integers; nothing can
  silently wrap,
* every routine is deterministic: fixed pivot rules, no randomness, no
  dependence on hash iteration order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import StructuralError


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, x, y) with g = x*a + y*b, g >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


class IntMatrix:
    """Immutable integer matrix.

    Stored as a tuple of row tuples.  ``cols`` must be supplied for
    matrices with zero rows, where the shape cannot be inferred.
    """

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Sequence[int]], *, cols: int | None = None):
        packed = tuple(tuple(r) for r in rows)
        if packed:
            width = len(packed[0])
            for r in packed:
                if len(r) != width:
                    raise StructuralError("ragged matrix: rows of unequal length")
            if cols is not None and cols != width:
                raise StructuralError(
                    f"declared column count {cols} does not match rows of length {width}"
                )
        else:
            if cols is None:
                raise StructuralError("matrix with no rows needs an explicit column count")
            width = cols
        for r in packed:
            for v in r:
                if not isinstance(v, int) or isinstance(v, bool):
                    raise StructuralError(f"matrix entry {v!r} is not an integer")
        self._rows = packed
        self.nrows = len(packed)
        self.ncols = width

    # -- constructors -------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls([[0] * ncols for _ in range(nrows)], cols=ncols)

    @classmethod
    def from_cols(cls, cols: Sequence[Sequence[int]], *, rows: int | None = None) -> "IntMatrix":
        if not cols:
            if rows is None:
                raise StructuralError("matrix with no columns needs an explicit row count")
            return cls([[] for _ in range(rows)], cols=0)
        height = len(cols[0])
        return cls([[c[i] for c in cols] for i in range(height)], cols=len(cols))

    # -- access -------------------------------------------------------

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    @property
    def entries(self) -> tuple[int, ...]:
        """Row-major flat view."""
        return tuple(v for r in self._rows for v in r)

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._rows)

    def at(self, i: int, j: int) -> int:
        return self._rows[i][j]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.ncols == other.ncols
            and self._rows == other._rows
        )

    def __hash__(self) -> int:
        return hash((self.ncols, self._rows))

    def __repr__(self) -> str:
        return f"IntMatrix({self.nrows}x{self.ncols})"

    # -- arithmetic ---------------------------------------------------

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            [[self._rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            cols=self.nrows,
        )

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise StructuralError(
                f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}"
            )
        ocols = other.ncols
        out = []
        for r in self._rows:
            acc = [0] * ocols
            for k, v in enumerate(r):
                if v:
                    orow = other._rows[k]
                    for j in range(ocols):
                        w = orow[j]
                        if w:
                            acc[j] += v * w
            out.append(acc)
        return IntMatrix(out, cols=ocols)

    def matvec(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.ncols:
            raise StructuralError("vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self._rows)

    def neg(self) -> "IntMatrix":
        return IntMatrix([[-v for v in r] for r in self._rows], cols=self.ncols)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.nrows != other.nrows:
            raise StructuralError("hstack needs equal row counts")
        return IntMatrix(
            [a + b for a, b in zip(self._rows, other._rows)],
            cols=self.ncols + other.ncols,
        )

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.ncols:
            raise StructuralError("vstack needs equal column counts")
        return IntMatrix(self._rows + other._rows, cols=self.ncols)

    def is_zero(self) -> bool:
        return all(v == 0 for r in self._rows for v in r)


def block_diag(blocks: Sequence[IntMatrix]) -> IntMatrix:
    nrows = sum(b.nrows for b in blocks)
    ncols = sum(b.ncols for b in blocks)
    out = [[0] * ncols for _ in range(nrows)]
    roff = coff = 0
    for b in blocks:
        for i, r in enumerate(b.rows):
            out[roff + i][coff : coff + b.ncols] = list(r)
        roff += b.nrows
        coff += b.ncols
    return IntMatrix(out, cols=ncols)


# ---------------------------------------------------------------------------
# Hermite normal form of a row lattice
# ---------------------------------------------------------------------------


def _echelon_insert(pivots: dict[int, list[int]], row: list[int]) -> None:
    """Insert ``row`` into an echelon keyed by leading column, combining
    with existing rows by gcd steps.  Mutates ``pivots`` and ``row``."""
    width = len(row)
    lead = 0
    while True:
        while lead < width and row[lead] == 0:
            lead += 1
        if lead == width:
            return  # dependent row, reduced away
        if lead not in pivots:
            if row[lead] < 0:
                for k in range(lead, width):
                    row[k] = -row[k]
            pivots[lead] = row
            return
        p = pivots[lead]
        a, b = p[lead], row[lead]
        if b % a == 0:
            q = b // a
            for k in range(lead, width):
                row[k] -= q * p[k]
        else:
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            for k in range(lead, width):
                pk, rk = p[k], row[k]
                p[k] = x * pk + y * rk
                row[k] = -bg * pk + ag * rk
        # after either step row[lead] == 0; continue scanning right


def hermite_rows(rows: Iterable[Sequence[int]], width: int) -> tuple[tuple[int, ...], ...]:
    """Canonical Hermite normal form of the lattice spanned by ``rows``.

    Pivots are positive, pivot columns strictly increase, entries above a
    pivot are reduced into [0, pivot), zero rows are dropped.  The result
    depends only on the spanned lattice.
    """
    pivots: dict[int, list[int]] = {}
    for r in rows:
        rr = list(r)
        if len(rr) != width:
            raise StructuralError("row length does not match lattice width")
        _echelon_insert(pivots, rr)
    order = sorted(pivots)
    ech = [pivots[c] for c in order]
    # reduce entries above each pivot into [0, pivot)
    for idx in range(len(order) - 1, -1, -1):
        c = order[idx]
        prow = ech[idx]
        pv = prow[c]
        for above in range(idx):
            q = ech[above][c] // pv
            if q:
                arow = ech[above]
                for k in range(c, width):
                    arow[k] -= q * prow[k]
    return tuple(tuple(r) for r in ech)


def lattice_solve(
    basis: Sequence[Sequence[int]], vec: Sequence[int]
) -> tuple[int, ...] | None:
    """Coefficients c with vec = sum c_i * basis_i, or None.

    ``basis`` must be in echelon form with strictly increasing pivots
    (as produced by :func:`hermite_rows`)."""
    work = list(vec)
    coeffs = []
    for row in basis:
        lead = next((k for k, v in enumerate(row) if v), None)
        if lead is None:
            coeffs.append(0)
            continue
        q, r = divmod(work[lead], row[lead])
        if r:
            return None
        if q:
            for k in range(lead, len(work)):
                work[k] -= q * row[k]
        coeffs.append(q)
    if any(work):
        return None
    return tuple(coeffs)


def lattice_contains(basis: Sequence[Sequence[int]], vec: Sequence[int]) -> bool:
    return lattice_solve(basis, vec) is not None


def lattice_reduce(basis: Sequence[Sequence[int]], vec: Sequence[int]) -> tuple[int, ...]:
    """Canonical representative of ``vec`` modulo the row lattice: at each
    pivot column the result lies in [0, pivot)."""
    work = list(vec)
    for row in basis:
        lead = next((k for k, v in enumerate(row) if v), None)
        if lead is None:
            continue
        q = work[lead] // row[lead]
        if q:
            for k in range(lead, len(work)):
                work[k] -= q * row[k]
    return tuple(work)


def hermite_normal_form(m: IntMatrix) -> IntMatrix:
    """Row-style canonical Hermite normal form, zero rows dropped."""
    rows = hermite_rows(m.rows, m.ncols)
    return IntMatrix(rows, cols=m.ncols)


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix (error if not unimodular)."""
    if m.nrows != m.ncols:
        raise StructuralError("only square matrices can be unimodular")
    n = m.nrows
    aug = hermite_rows([list(m.row(i)) + [1 if j == i else 0 for j in range(n)]
                        for i in range(n)], 2 * n)
    if len(aug) != n or any(aug[i][i] != 1 for i in range(n)):
        raise StructuralError("matrix is not unimodular")
    # aug rows are [I | M^-1] up to the canonical reduction, which is exact
    # here because all pivots are 1.
    inv_rows = [r[n:] for r in aug]
    return IntMatrix(inv_rows, cols=n)


# ---------------------------------------------------------------------------
# Sparse kernels
# ---------------------------------------------------------------------------
#
# Cochain differentials are huge but very sparse, so kernels are computed on
# columns stored as {row: value} dicts.  The kernel of A is read off a
# gcd-echelon of the rows of A^T augmented with an identity block: rows whose
# A^T-part vanishes have kernel vectors in the identity part.


def _sparse_sub(row: dict[int, int], other: dict[int, int], q: int) -> dict[int, int]:
    """row - q * other, dropping zeros."""
    out = dict(row)
    for k, v in other.items():
        w = out.get(k, 0) - q * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _back_reduce(
    pivots: dict[int, dict[int, int]], row: dict[int, int], done: set[int]
) -> dict[int, int]:
    """Floor-reduce the row at every pivot column not in ``done``.

    Keeps stored rows small: with unit pivots (the common case for cochain
    differentials) the reduced entries vanish outright, which is what
    prevents coefficient blow-up in the gcd echelon."""
    while True:
        hit = None
        for k in row:
            if k not in done and k in pivots:
                if hit is None or k < hit:
                    hit = k
        if hit is None:
            return row
        p = pivots[hit]
        q = row[hit] // p[hit]
        if q:
            row = _sparse_sub(row, p, q)
        done.add(hit)


def _sparse_insert(pivots: dict[int, dict[int, int]], row: dict[int, int]) -> None:
    while row:
        c = min(row)
        if c not in pivots:
            if row[c] < 0:
                row = {k: -v for k, v in row.items()}
            pivots[c] = _back_reduce(pivots, row, {c})
            return
        p = pivots[c]
        a, b = p[c], row[c]
        if b % a == 0:
            row = _sparse_sub(row, p, b // a)
        else:
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            newp: dict[int, int] = {}
            newr: dict[int, int] = {}
            for k in set(p) | set(row):
                pk = p.get(k, 0)
                rk = row.get(k, 0)
                vp = x * pk + y * rk
                vr = -bg * pk + ag * rk
                if vp:
                    newp[k] = vp
                if vr:
                    newr[k] = vr
            pivots[c] = _back_reduce(pivots, newp, {c})
            row = newr


def sparse_kernel(
    columns: Sequence[dict[int, int]], nrows: int
) -> tuple[tuple[int, ...], ...]:
    """Basis, as canonical Hermite rows, of {x : sum x_j * col_j = 0}.

    ``columns[j]`` is the j-th column of the matrix as a {row: value} dict;
    ``nrows`` bounds the row indices."""
    n = len(columns)
    pivots: dict[int, dict[int, int]] = {}
    for j, col in enumerate(columns):
        row = dict(col)
        row[nrows + j] = 1
        _sparse_insert(pivots, row)
    kernel = []
    for key in sorted(pivots):
        if key >= nrows:
            r = pivots[key]
            vec = [0] * n
            for k, v in r.items():
                vec[k - nrows] = v
            kernel.append(vec)
    return hermite_rows(kernel, n)


def preimage_kernel(
    columns: Sequence[dict[int, int]],
    nrows: int,
    lattice_rows: Sequence[Sequence[int]],
) -> tuple[tuple[int, ...], ...]:
    """Basis of {x : A x lies in the lattice spanned by ``lattice_rows``}.

    Computed as the x-part of ker [A | L] re-normalized to Hermite form."""
    aug: list[dict[int, int]] = list(columns)
    for r in lattice_rows:
        aug.append({i: v for i, v in enumerate(r) if v})
    ker = sparse_kernel(aug, nrows)
    n = len(columns)
    return hermite_rows([row[:n] for row in ker], n)


def sparse_from_matrix(m: IntMatrix) -> list[dict[int, int]]:
    """Columns of a dense matrix as sparse dicts."""
    cols: list[dict[int, int]] = [dict() for _ in range(m.ncols)]
    for i, r in enumerate(m.rows):
        for j, v in enumerate(r):
            if v:
                cols[j][i] = v
    return cols


def sparse_apply(columns: Sequence[dict[int, int]], vec: Sequence[int]) -> dict[int, int]:
    """A @ vec for A given by sparse columns."""
    acc: dict[int, int] = {}
    for j, x in enumerate(vec):
        if x:
            for i, v in columns[j].items():
                w = acc.get(i, 0) + x * v
                if w:
                    acc[i] = w
                else:
                    del acc[i]
    return acc


def sparse_compose(
    outer: Sequence[dict[int, int]], inner: Sequence[dict[int, int]]
) -> list[dict[int, int]]:
    """Columns of A @ B where outer gives A's columns and inner gives B's."""
    out = []
    for col in inner:
        acc: dict[int, int] = {}
        for j, x in col.items():
            for i, v in outer[j].items():
                w = acc.get(i, 0) + x * v
                if w:
                    acc[i] = w
                else:
                    del acc[i]
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ source @ V == D with U, V unimodular and D diagonal, diagonal
    entries nonnegative, each dividing the next."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    source: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(
            self.D.at(i, i) for i in range(min(self.D.nrows, self.D.ncols))
        )


def smith_normal_form(m: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivot rule (fixed for reproducibility): among the nonzero entries of
    the remaining submatrix, take one of minimal absolute value; ties are
    broken by the lowest (row, col) position in lexicographic order.
    """
    nr, nc = m.nrows, m.ncols
    D = [list(r) for r in m.rows]
    U = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    V = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def swap_rows(i1, i2):
        if i1 != i2:
            D[i1], D[i2] = D[i2], D[i1]
            U[i1], U[i2] = U[i2], U[i1]

    def swap_cols(j1, j2):
        if j1 != j2:
            for row in D:
                row[j1], row[j2] = row[j2], row[j1]
            for row in V:
                row[j1], row[j2] = row[j2], row[j1]

    def negate_row(i):
        D[i] = [-v for v in D[i]]
        U[i] = [-v for v in U[i]]

    def sub_row(dst, src, q):
        # row_dst -= q * row_src
        Dd, Ds = D[dst], D[src]
        for k in range(nc):
            Dd[k] -= q * Ds[k]
        Ud, Us = U[dst], U[src]
        for k in range(nr):
            Ud[k] -= q * Us[k]

    def sub_col(dst, src, q):
        for row in D:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    k = 0
    limit = min(nr, nc)
    while k < limit:
        # pivot search: minimal |value|, lowest (row, col) on ties
        best_i = best_j = -1
        best_abs = 0
        for i in range(k, nr):
            for j in range(k, nc):
                v = D[i][j]
                if v and (best_i < 0 or abs(v) < best_abs):
                    best_i, best_j, best_abs = i, j, abs(v)
        if best_i < 0:
            break
        swap_rows(k, best_i)
        swap_cols(k, best_j)
        if D[k][k] < 0:
            negate_row(k)

        while True:
            dirty = False
            for i in range(k + 1, nr):
                a = D[i][k]
                if a:
                    q = a // D[k][k]
                    if q:
                        sub_row(i, k, q)
                    if D[i][k]:
                        # remainder strictly smaller than pivot: promote it
                        swap_rows(i, k)
                        if D[k][k] < 0:
                            negate_row(k)
                        dirty = True
            for j in range(k + 1, nc):
                a = D[k][j]
                if a:
                    q = a // D[k][k]
                    if q:
                        sub_col(j, k, q)
                    if D[k][j]:
                        swap_cols(j, k)
                        dirty = True
                        if D[k][k] < 0:
                            negate_row(k)
            if dirty:
                continue
            if any(D[i][k] for i in range(k + 1, nr)) or any(
                D[k][j] for j in range(k + 1, nc)
            ):
                continue
            # divisibility: the pivot must divide the whole submatrix
            p = D[k][k]
            viol = None
            for i in range(k + 1, nr):
                for j in range(k + 1, nc):
                    if D[i][j] % p:
                        viol = i
                        break
                if viol is not None:
                    break
            if viol is None:
                break
            sub_row(k, viol, -1)  # add the offending row to the pivot row
        k += 1

    return SmithDecomposition(
        U=IntMatrix(U, cols=nr),
        D=IntMatrix(D, cols=nc),
        V=IntMatrix(V, cols=nc),
        source=m,
    )

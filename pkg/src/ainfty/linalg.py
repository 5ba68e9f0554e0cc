"""Exact sparse linear algebra: rank, kernels, solving, Smith normal form.

Matrices are stored as a map (row, col) -> nonzero value.  Over a field,
elimination uses dense row lists below 64 columns and dict rows above
(tensor-word bases are large and sparse; tiny blocks are faster dense).
Over Z everything goes through the Smith normal form with unimodular
transforms, so kernels are saturated and solvability is decided exactly.
"""

from .errors import RingMismatch, UnsupportedRing
from .rings import Integers

_DENSE_LIMIT = 64


class SparseMatrix:
    """rows x cols matrix over a CoeffRing; no zero entry is ever stored."""

    def __init__(self, ring, rows, cols, entries=None):
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            for (i, j), v in entries.items():
                self[i, j] = v

    def __getitem__(self, ij):
        return self.entries.get(ij, self.ring.zero())

    def __setitem__(self, ij, v):
        i, j = ij
        assert 0 <= i < self.rows and 0 <= j < self.cols, (ij, self.rows, self.cols)
        if self.ring.is_zero(v):
            self.entries.pop(ij, None)
        else:
            self.entries[ij] = v

    def add_to(self, i, j, v):
        self[i, j] = self.ring.add(self[i, j], v)

    def copy(self):
        m = SparseMatrix(self.ring, self.rows, self.cols)
        m.entries = dict(self.entries)
        return m

    def transpose(self):
        m = SparseMatrix(self.ring, self.cols, self.rows)
        m.entries = {(j, i): v for (i, j), v in self.entries.items()}
        return m

    def is_zero(self):
        return not self.entries

    @classmethod
    def identity(cls, ring, n):
        m = cls(ring, n, n)
        one = ring.one()
        for i in range(n):
            m.entries[(i, i)] = one
        return m

    @classmethod
    def from_rows(cls, ring, rows, cols, row_list):
        m = cls(ring, rows, cols)
        for i, row in enumerate(row_list):
            for j, v in enumerate(row):
                m[i, j] = ring.coerce(v)
        return m

    def matmul(self, other):
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        assert self.cols == other.rows
        R = self.ring
        out = SparseMatrix(R, self.rows, other.cols)
        by_row = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                out.add_to(i, j, R.mul(a, b))
        return out

    def apply(self, vec):
        """Multiply by a column vector given as {index: value}."""
        R = self.ring
        out = {}
        for (i, j), a in self.entries.items():
            v = vec.get(j)
            if v is None:
                continue
            s = R.add(out.get(i, R.zero()), R.mul(a, v))
            if R.is_zero(s):
                out.pop(i, None)
            else:
                out[i] = s
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SparseMatrix)
            and self.ring == other.ring
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"SparseMatrix({self.ring}, {self.rows}x{self.cols}, nnz={len(self.entries)})"


def _rows_as_dicts(M):
    rows = [dict() for _ in range(M.rows)]
    for (i, j), v in M.entries.items():
        rows[i][j] = v
    return rows


def _field_echelon(M, track=None):
    """Row echelon form over a field.

    Returns (pivot column list, row dicts).  If ``track`` is a list of
    payload rows (dicts), the same row operations are applied to it.
    """
    R = M.ring
    assert R.is_field
    dense = M.cols < _DENSE_LIMIT
    if dense:
        rows = [[R.zero()] * M.cols for _ in range(M.rows)]
        for (i, j), v in M.entries.items():
            rows[i][j] = v
    else:
        rows = _rows_as_dicts(M)
    pivots = []
    rank = 0
    for col in range(M.cols):
        piv = None
        for r in range(rank, M.rows):
            v = rows[r][col] if dense else rows[r].get(col)
            if v is not None and not R.is_zero(v):
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        if track is not None:
            track[rank], track[piv] = track[piv], track[rank]
        inv = R.inv(rows[rank][col] if dense else rows[rank][col])
        if dense:
            rows[rank] = [R.mul(inv, x) for x in rows[rank]]
        else:
            rows[rank] = {j: R.mul(inv, x) for j, x in rows[rank].items()}
        if track is not None:
            track[rank] = {j: R.mul(inv, x) for j, x in track[rank].items()}
        for r in range(M.rows):
            if r == rank:
                continue
            f = rows[r][col] if dense else rows[r].get(col)
            if f is None or R.is_zero(f):
                continue
            nf = R.neg(f)
            if dense:
                prow = rows[rank]
                rows[r] = [R.add(x, R.mul(nf, p)) for x, p in zip(rows[r], prow)]
            else:
                row = rows[r]
                for j, p in rows[rank].items():
                    s = R.add(row.get(j, R.zero()), R.mul(nf, p))
                    if R.is_zero(s):
                        row.pop(j, None)
                    else:
                        row[j] = s
            if track is not None:
                trow = track[r]
                for j, p in track[rank].items():
                    s = R.add(trow.get(j, R.zero()), R.mul(nf, p))
                    if R.is_zero(s):
                        trow.pop(j, None)
                    else:
                        trow[j] = s
        pivots.append(col)
        rank += 1
        if rank == M.rows:
            break
    if dense:
        rows = [
            {j: v for j, v in enumerate(row) if not R.is_zero(v)} for row in rows
        ]
    return pivots, rows


def rank_kernel(M):
    """Rank and a kernel basis (list of {index: value} column vectors).

    Over a field: Gaussian elimination; rank + dim ker = cols.
    Over Z: via Smith normal form; the kernel basis generates the full
    integer kernel (saturated).
    """
    R = M.ring
    if R.is_field:
        pivots, rows = _field_echelon(M)
        rank = len(pivots)
        pivot_set = set(pivots)
        free = [j for j in range(M.cols) if j not in pivot_set]
        kernel = []
        for j in free:
            vec = {j: R.one()}
            for r, pc in enumerate(pivots):
                v = rows[r].get(j)
                if v is not None and not R.is_zero(v):
                    vec[pc] = R.neg(v)
            kernel.append(vec)
        return rank, kernel
    if isinstance(R, Integers):
        D, U, V = smith_normal_form(M)
        rank = sum(1 for i in range(min(M.rows, M.cols)) if D[i, i] != 0)
        kernel = []
        for j in range(rank, M.cols):
            vec = {i: V[i, j] for i in range(M.cols) if V[i, j] != 0}
            kernel.append(vec)
        return rank, kernel
    raise UnsupportedRing(f"rank_kernel over {R}")


def solve_linear(M, b):
    """One exact solution x of M x = b over a field, or None.

    b and the result are {index: value} maps.  Over Z this raises
    UnsupportedRing: the caller must supply a witness instead (use
    solve_integer when an exact Z decision is genuinely wanted).
    """
    R = M.ring
    if not R.is_field:
        raise UnsupportedRing(f"solve_linear needs a field, got {R}")
    aug = SparseMatrix(R, M.rows, M.cols + 1)
    aug.entries = dict(M.entries)
    for i, v in b.items():
        aug[i, M.cols] = v
    pivots, rows = _field_echelon(aug)
    if M.cols in pivots:
        return None
    x = {}
    for r, pc in enumerate(pivots):
        v = rows[r].get(M.cols)
        if v is not None and not R.is_zero(v):
            x[pc] = v
    return x


def smith_normal_form(M):
    """U M V = D with U, V unimodular and d1 | d2 | ... on the diagonal.

    Entries must be integers.  Returns (D, U, V) as SparseMatrix over Z.
    """
    R = M.ring
    if not isinstance(R, Integers):
        raise UnsupportedRing(f"smith_normal_form over {R}")
    n, m = M.rows, M.cols
    A = [[M[i, j] for j in range(m)] for i in range(n)]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    V = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def row_op(i1, i2, q):
        # row i1 -= q * row i2
        A[i1] = [a - q * b for a, b in zip(A[i1], A[i2])]
        U[i1] = [a - q * b for a, b in zip(U[i1], U[i2])]

    def col_op(j1, j2, q):
        for row in A:
            row[j1] -= q * row[j2]
        for row in V:
            row[j1] -= q * row[j2]

    def swap_rows(i1, i2):
        A[i1], A[i2] = A[i2], A[i1]
        U[i1], U[i2] = U[i2], U[i1]

    def swap_cols(j1, j2):
        for row in A:
            row[j1], row[j2] = row[j2], row[j1]
        for row in V:
            row[j1], row[j2] = row[j2], row[j1]

    def negate_row(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    limit = min(n, m)
    while t < limit:
        # find a nonzero pivot of least absolute value in the trailing block
        best = None
        for i in range(t, n):
            for j in range(t, m):
                a = A[i][j]
                if a != 0 and (best is None or abs(a) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        if A[t][t] < 0:
            negate_row(t)
        dirty = False
        for i in range(t + 1, n):
            if A[i][t] != 0:
                q = A[i][t] // A[t][t]
                row_op(i, t, q)
                if A[i][t] != 0:
                    dirty = True
        for j in range(t + 1, m):
            if A[t][j] != 0:
                q = A[t][j] // A[t][t]
                col_op(j, t, q)
                if A[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility d_t | trailing entries
        d = A[t][t]
        bad = None
        for i in range(t + 1, n):
            for j in range(t + 1, m):
                if A[i][j] % d != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            # add the offending row to row t and restart this pivot
            A[t] = [a + b for a, b in zip(A[t], A[bad])]
            U[t] = [a + b for a, b in zip(U[t], U[bad])]
            continue
        t += 1

    ZR = R
    D = SparseMatrix(ZR, n, m)
    for i in range(n):
        for j in range(m):
            if A[i][j]:
                D[i, j] = A[i][j]
    Um = SparseMatrix(ZR, n, n)
    for i in range(n):
        for j in range(n):
            if U[i][j]:
                Um[i, j] = U[i][j]
    Vm = SparseMatrix(ZR, m, m)
    for i in range(m):
        for j in range(m):
            if V[i][j]:
                Vm[i, j] = V[i][j]
    return D, Um, Vm


def solve_integer(M, b):
    """One integer solution x of M x = b, or None (decided via Smith form)."""
    R = M.ring
    if not isinstance(R, Integers):
        raise UnsupportedRing(f"solve_integer over {R}")
    D, U, V = smith_normal_form(M)
    c = U.apply(b)
    y = {}
    for i in range(min(M.rows, M.cols)):
        d = D[i, i]
        ci = c.get(i, 0)
        if d == 0:
            if ci != 0:
                return None
        else:
            if ci % d != 0:
                return None
            if ci:
                y[i] = ci // d
    for i in range(min(M.rows, M.cols), M.rows):
        if c.get(i, 0) != 0:
            return None
    return V.apply(y)


def det_unimodular(M):
    """Determinant of a small integer matrix (used to test unimodularity)."""
    n = M.rows
    assert n == M.cols
    A = [[M[i, j] for j in range(n)] for i in range(n)]
    det = 1
    for t in range(n):
        piv = None
        for i in range(t, n):
            if A[i][t] != 0 and (piv is None or abs(A[i][t]) < abs(A[piv][t])):
                piv = i
        if piv is None:
            return 0
        if piv != t:
            A[t], A[piv] = A[piv], A[t]
            det = -det
        again = True
        while again:
            again = False
            for i in range(t + 1, n):
                if A[i][t] != 0:
                    q = A[i][t] // A[t][t]
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t] != 0:
                        A[t], A[i] = A[i], A[t]
                        det = -det
                        again = True
        det *= A[t][t]
    return det

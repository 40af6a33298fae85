"""Exact linear algebra: dense elimination over a coefficient field and
sparse elimination over F_p."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class LinearSystem:
    """A x = b over ``field``. ``labels`` names the unknowns (columns)."""

    field: object
    matrix: tuple
    rhs: tuple
    labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in self.matrix))
        object.__setattr__(self, "rhs", tuple(self.rhs))
        n = self.ncols
        for i, row in enumerate(self.matrix):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
        if len(self.rhs) != len(self.matrix):
            raise ValueError(f"rhs has {len(self.rhs)} entries for {len(self.matrix)} rows")
        if self.labels and len(self.labels) != n:
            raise ValueError("one label per unknown required")

    @property
    def nrows(self) -> int:
        return len(self.matrix)

    @property
    def ncols(self) -> int:
        if self.matrix:
            return len(self.matrix[0])
        return len(self.labels)

    def apply(self, x):
        K = self.field
        out = []
        for row in self.matrix:
            acc = K.zero
            for a, v in zip(row, x):
                if not K.is_zero(a) and not K.is_zero(v):
                    acc = K.add(acc, K.mul(a, v))
            out.append(acc)
        return out


@dataclass
class Solution:
    """Solution set description: particular + span(kernel), or infeasible."""

    particular: list | None
    kernel: list
    rank: int
    augmented_rank: int
    pivots: list = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.particular is not None


def gauss_solve(sys: LinearSystem) -> Solution:
    """Reduced row echelon elimination. Free variables are set to zero in
    the particular solution; kernel vectors have one free variable equal to 1."""
    K = sys.field
    n = sys.ncols
    rows = [list(r) + [b] for r, b in zip(sys.matrix, sys.rhs)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if not K.is_zero(rows[i][c])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = K.inv(rows[r][c])
        rows[r] = [K.mul(v, inv) if not K.is_zero(v) else v for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not K.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [
                    vi if K.is_zero(vr) else K.sub(vi, K.mul(f, vr))
                    for vi, vr in zip(rows[i], rows[r])
                ]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    rank = r
    inconsistent = any(not K.is_zero(rows[i][n]) for i in range(rank, len(rows)))
    aug_rank = rank + (1 if inconsistent else 0)
    free = [c for c in range(n) if c not in set(pivots)]
    kernel = []
    for f in free:
        v = [K.zero] * n
        v[f] = K.one
        for i, c in enumerate(pivots):
            v[c] = K.neg(rows[i][f])
        kernel.append(v)
    if inconsistent:
        return Solution(None, kernel, rank, aug_rank, pivots)
    x = [K.zero] * n
    for i, c in enumerate(pivots):
        x[c] = rows[i][n]
    return Solution(x, kernel, rank, aug_rank, pivots)


class FpEliminator:
    """Incremental sparse row reduction over F_p.

    Rows are dicts {column: value}; the right-hand side lives in column
    ``ncols``. Over F_2 rows are packed into Python ints.
    """

    def __init__(self, p: int, ncols: int):
        self.p = p
        self.ncols = ncols
        self.pivots = {}
        self.inconsistent = False
        self._colmask = (1 << ncols) - 1

    def add_row(self, coeffs: dict, rhs: int = 0):
        if self.p == 2:
            r = 0
            for c, v in coeffs.items():
                if v % 2:
                    r ^= 1 << c
            if rhs % 2:
                r ^= 1 << self.ncols
            self._add_bits(r)
        else:
            row = {c: v % self.p for c, v in coeffs.items() if v % self.p}
            if rhs % self.p:
                row[self.ncols] = rhs % self.p
            self._add_dict(row)

    def _add_bits(self, r: int):
        piv = self.pivots
        mask = self._colmask
        while r & mask:
            low = (r & -r).bit_length() - 1
            other = piv.get(low)
            if other is None:
                piv[low] = r
                return
            r ^= other
        if r:
            self.inconsistent = True

    def _add_dict(self, row: dict):
        p, n = self.p, self.ncols
        while True:
            cols = [c for c in row if c < n]
            if not cols:
                if row:
                    self.inconsistent = True
                return
            low = min(cols)
            other = self.pivots.get(low)
            if other is None:
                inv = pow(row[low], p - 2, p)
                self.pivots[low] = {c: (v * inv) % p for c, v in row.items()}
                return
            f = row[low]
            for c, v in other.items():
                nv = (row.get(c, 0) - f * v) % p
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self) -> Solution:
        """Back-substitute to reduced form and describe the solution set."""
        n, p = self.ncols, self.p
        order = sorted(self.pivots)
        if p == 2:
            red = dict(self.pivots)
            for c in reversed(order):
                rc = red[c]
                bit = 1 << c
                for c2 in order:
                    if c2 >= c:
                        break
                    if red[c2] & bit:
                        red[c2] ^= rc
            get = lambda c, j: (red[c] >> j) & 1
        else:
            red = {c: dict(r) for c, r in self.pivots.items()}
            for c in reversed(order):
                rc = red[c]
                for c2 in order:
                    if c2 >= c:
                        break
                    f = red[c2].get(c)
                    if f:
                        row = red[c2]
                        for j, v in rc.items():
                            nv = (row.get(j, 0) - f * v) % p
                            if nv:
                                row[j] = nv
                            else:
                                row.pop(j, None)
            get = lambda c, j: red[c].get(j, 0)
        pivset = set(order)
        free = [c for c in range(n) if c not in pivset]
        kernel = []
        for f in free:
            v = [0] * n
            v[f] = 1
            for c in order:
                val = get(c, f)
                if val:
                    v[c] = (-val) % p
            kernel.append(v)
        rank = len(order)
        if self.inconsistent:
            return Solution(None, kernel, rank, rank + 1, order)
        x = [0] * n
        for c in order:
            x[c] = get(c, n) % p
        return Solution(x, kernel, rank, rank, order)


def fp_solve(rows, ncols: int, p: int) -> Solution:
    """Solve a sparse F_p system given as (coeff dict, rhs) pairs."""
    el = FpEliminator(p, ncols)
    for coeffs, rhs in rows:
        el.add_row(coeffs, rhs)
    return el.solve()


def _bits(indices) -> int:
    if not indices:
        return 0
    ba = bytearray(max(indices) // 8 + 1)
    for i in indices:
        ba[i >> 3] ^= 1 << (i & 7)
    return int.from_bytes(ba, "little")


def fp_column_solve(columns, rhs, p: int) -> Solution:
    """Solve sum_i x_i * columns[i] = rhs over F_p.

    Columns and rhs are sparse dicts {coordinate: value}. Columns are reduced
    against each other, so the work scales with the number of unknowns rather
    than the number of coordinates. A column that reduces to zero yields a
    kernel vector; together these form a kernel basis.
    """
    index = {}
    n = len(columns)

    def idx(c):
        i = index.get(c)
        if i is None:
            i = index[c] = len(index)
        return i

    if p == 2:
        vecs = [_bits([idx(c) for c, v in col.items() if v % 2]) for col in columns]
        target = _bits([idx(c) for c, v in rhs.items() if v % 2])
        basis = {}
        kernel_bits = []
        for i, v in enumerate(vecs):
            combo = 1 << i
            while v:
                low = (v & -v).bit_length() - 1
                hit = basis.get(low)
                if hit is None:
                    basis[low] = (v, combo)
                    break
                v ^= hit[0]
                combo ^= hit[1]
            else:
                kernel_bits.append(combo)
        kernel = [[(kb >> j) & 1 for j in range(n)] for kb in kernel_bits]
        v, combo = target, 0
        while v:
            low = (v & -v).bit_length() - 1
            hit = basis.get(low)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        rank = len(basis)
        pivots = sorted((c.bit_length() - 1) for _, c in basis.values())
        if v:
            return Solution(None, kernel, rank, rank + 1, pivots)
        return Solution([(combo >> j) & 1 for j in range(n)], kernel, rank, rank, pivots)

    vecs = [{idx(c): v % p for c, v in col.items() if v % p} for col in columns]
    target = {idx(c): v % p for c, v in rhs.items() if v % p}
    basis = {}
    kernel = []

    def reduce(v, combo):
        while v:
            low = min(v)
            hit = basis.get(low)
            if hit is None:
                return v, combo, low
            f = v[low]
            bv, bc = hit
            for k, x in bv.items():
                nx = (v.get(k, 0) - f * x) % p
                if nx:
                    v[k] = nx
                else:
                    v.pop(k, None)
            for k, x in bc.items():
                nx = (combo.get(k, 0) - f * x) % p
                if nx:
                    combo[k] = nx
                else:
                    combo.pop(k, None)
        return v, combo, None

    for i, v in enumerate(vecs):
        v, combo, low = reduce(dict(v), {i: 1})
        if low is None:
            kernel.append([combo.get(j, 0) for j in range(n)])
        else:
            inv = pow(v[low], p - 2, p)
            basis[low] = ({k: (x * inv) % p for k, x in v.items()},
                          {k: (x * inv) % p for k, x in combo.items()})
    # reducing the target leaves target + sum combo_k col_k, so x = -combo
    v, combo, low = reduce(dict(target), {})
    rank = len(basis)
    pivots = sorted(max(c) for _, c in basis.values())
    if low is not None:
        return Solution(None, kernel, rank, rank + 1, pivots)
    return Solution([(-combo.get(j, 0)) % p for j in range(n)], kernel, rank, rank, pivots)

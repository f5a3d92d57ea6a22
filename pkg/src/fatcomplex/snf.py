"""Exact sparse integer matrices and Smith normal form.

Everything is arbitrary-precision: boundary matrices start with small
entries but elimination can grow them, and torsion computations are
meaningless with overflow.  The SNF engine eliminates with a greedy
pivot rule (smallest magnitude, then least fill) and keeps the
divisibility chain by re-absorbing any entry the current pivot fails to
divide.  Unimodular transforms and their inverses are tracked only on
request; rank-and-factors callers skip that cost.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

__all__ = ["SparseIntegerMatrix", "SmithForm", "smith_normal_form"]


class SparseIntegerMatrix:
    """Integer matrix stored as {(row, col): nonzero value}."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            for (r, c), v in (
                entries.items() if isinstance(entries, dict) else entries
            ):
                self[r, c] = v

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def __setitem__(self, key, value):
        r, c = key
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(f"entry {key} outside {self.rows}x{self.cols}")
        if value:
            self.entries[key] = value
        else:
            self.entries.pop(key, None)

    def add_to(self, r, c, value):
        self[r, c] = self[r, c] + value

    def __eq__(self, other):
        if not isinstance(other, SparseIntegerMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        return (
            f"SparseIntegerMatrix({self.rows}x{self.cols}, "
            f"{len(self.entries)} nonzero)"
        )

    @property
    def nnz(self):
        return len(self.entries)

    def is_zero(self):
        return not self.entries

    def copy(self):
        out = SparseIntegerMatrix(self.rows, self.cols)
        out.entries = dict(self.entries)
        return out

    def transpose(self):
        out = SparseIntegerMatrix(self.cols, self.rows)
        out.entries = {(c, r): v for (r, c), v in self.entries.items()}
        return out

    @classmethod
    def identity(cls, n):
        out = cls(n, n)
        out.entries = {(i, i): 1 for i in range(n)}
        return out

    @classmethod
    def from_rows(cls, rows):
        m = cls(len(rows), len(rows[0]) if rows else 0)
        for r, row in enumerate(rows):
            for c, v in enumerate(row):
                if v:
                    m.entries[(r, c)] = v
        return m

    def to_rows(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def column(self, c):
        return {r: v for (r, cc), v in self.entries.items() if cc == c}

    def mat_mul(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row = {}
        for (r, c), v in self.entries.items():
            by_row.setdefault(r, []).append((c, v))
        other_rows = {}
        for (r, c), v in other.entries.items():
            other_rows.setdefault(r, []).append((c, v))
        out = SparseIntegerMatrix(self.rows, other.cols)
        acc = out.entries
        for r, items in by_row.items():
            row_acc = {}
            for k, v in items:
                for c, w in other_rows.get(k, ()):
                    row_acc[c] = row_acc.get(c, 0) + v * w
            for c, total in row_acc.items():
                if total:
                    acc[(r, c)] = total
        return out

    def mat_vec(self, vec):
        """Multiply by a dense integer vector (length = cols)."""
        out = [0] * self.rows
        for (r, c), v in self.entries.items():
            if vec[c]:
                out[r] += v * vec[c]
        return out

    # -- JSON interchange: sorted triplets -----------------------------------

    def to_json_obj(self):
        triplets = sorted((r, c, v) for (r, c), v in self.entries.items())
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[r, c, v] for r, c, v in triplets]}

    def to_json(self):
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj):
        m = cls(int(obj["rows"]), int(obj["cols"]))
        for r, c, v in obj["entries"]:
            m[int(r), int(c)] = int(v)
        return m


@dataclass
class SmithForm:
    """L . A . R = diag(d_1, ..., d_r, 0, ...) with d_1 | d_2 | ... .

    ``diagonal`` holds the nonzero invariant factors (all positive).
    The transforms and their inverses are present only when the form
    was computed with ``want_transforms=True``.
    """

    rows: int
    cols: int
    diagonal: tuple
    left: SparseIntegerMatrix | None = None
    right: SparseIntegerMatrix | None = None
    left_inv: SparseIntegerMatrix | None = None
    right_inv: SparseIntegerMatrix | None = None

    @property
    def rank(self):
        return len(self.diagonal)

    def diagonal_matrix(self):
        d = SparseIntegerMatrix(self.rows, self.cols)
        for i, v in enumerate(self.diagonal):
            d[i, i] = v
        return d


class _Workspace:
    """Row/column indexed mutable copy of a sparse matrix."""

    def __init__(self, m):
        self.row = {}  # r -> {c: v}
        self.col = {}  # c -> set of r
        for (r, c), v in m.entries.items():
            self.row.setdefault(r, {})[c] = v
            self.col.setdefault(c, set()).add(r)

    def value(self, r, c):
        return self.row.get(r, {}).get(c, 0)

    def set(self, r, c, v):
        if v:
            self.row.setdefault(r, {})[c] = v
            self.col.setdefault(c, set()).add(r)
        else:
            rr = self.row.get(r)
            if rr and c in rr:
                del rr[c]
                if not rr:
                    del self.row[r]
                cc = self.col[c]
                cc.discard(r)
                if not cc:
                    del self.col[c]

    def add_row(self, src, dst, q):
        """row[dst] += q * row[src]"""
        for c, v in list(self.row.get(src, {}).items()):
            self.set(dst, c, self.value(dst, c) + q * v)

    def add_col(self, src, dst, q):
        """col[dst] += q * col[src]"""
        for r in list(self.col.get(src, ())):
            v = self.row[r][src]
            self.set(r, dst, self.value(r, dst) + q * v)

    def negate_row(self, r):
        for c, v in self.row.get(r, {}).items():
            self.row[r][c] = -v

    def nonzero(self):
        return any(self.row.values())


def _t_add_row(mat, src, dst, q):
    if mat is not None:
        for c, v in list(mat.row.get(src, {}).items()):
            mat.set(dst, c, mat.value(dst, c) + q * v)


def _t_add_col(mat, src, dst, q):
    if mat is not None:
        for r in list(mat.col.get(src, ())):
            v = mat.row[r][src]
            mat.set(r, dst, mat.value(r, dst) + q * v)


def _t_negate_row(mat, r):
    if mat is not None:
        for c in list(mat.row.get(r, {})):
            mat.row[r][c] = -mat.row[r][c]


def _t_negate_col(mat, c):
    if mat is not None:
        for r in list(mat.col.get(c, ())):
            mat.row[r][c] = -mat.row[r][c]


def _workspace_identity(n):
    w = _Workspace(SparseIntegerMatrix(0, 0))
    for i in range(n):
        w.row[i] = {i: 1}
        w.col[i] = {i}
    return w


def _to_sparse(w, rows, cols):
    m = SparseIntegerMatrix(rows, cols)
    for r, rr in w.row.items():
        for c, v in rr.items():
            m.entries[(r, c)] = v
    return m


def smith_normal_form(m, want_transforms=True):
    """Exact Smith normal form of an arbitrary integer matrix.

    Pivots are chosen among the entries of a currently-sparsest column,
    preferring units and short rows (least fill).  After clearing the
    pivot's row and column, any remaining entry not divisible by the
    pivot is folded back in (classic absorption step), which keeps the
    final diagonal a divisibility chain.  Deterministic: ties break on
    indices.
    """
    a = _Workspace(m)
    # transforms: A_orig = L^-1 D R^-1, maintained as L A R = D
    L = _workspace_identity(m.rows) if want_transforms else None
    Li = _workspace_identity(m.rows) if want_transforms else None
    R = _workspace_identity(m.cols) if want_transforms else None
    Ri = _workspace_identity(m.cols) if want_transforms else None
    pivots = []

    def row_op(src, dst, q):
        # row[dst] += q row[src]; L gets the same op, Li the inverse col op
        a.add_row(src, dst, q)
        _t_add_row(L, src, dst, q)
        _t_add_col(Li, dst, src, -q)

    def col_op(src, dst, q):
        a.add_col(src, dst, q)
        _t_add_col(R, src, dst, q)
        _t_add_row(Ri, dst, src, -q)

    while a.nonzero():
        # pivot: among the sparsest columns take min (|v|, row fill, ids)
        best = None
        min_len = min(len(rs) for rs in a.col.values())
        for c in sorted(cc for cc, rs in a.col.items() if len(rs) == min_len):
            for r in a.col[c]:
                v = a.row[r][c]
                key = (abs(v), len(a.row[r]), r, c)
                if best is None or key < best[0]:
                    best = (key, r, c)
            if best and best[0][0] == 1:
                break
        if best[0][0] != 1:
            # no unit in the sparsest columns: global scan for a unit
            for (r2, rr) in a.row.items():
                for c2, v2 in rr.items():
                    key = (abs(v2), len(rr), r2, c2)
                    if key < best[0]:
                        best = (key, r2, c2)
        _, pr, pc = best

        while True:
            pv = a.value(pr, pc)
            # clear the pivot column with row ops
            again = True
            while again:
                again = False
                for r in sorted(a.col.get(pc, set()) - {pr}):
                    v = a.value(r, pc)
                    if v == 0:
                        continue
                    q = v // pv
                    if v % pv == 0:
                        row_op(pr, r, -q)
                    else:
                        row_op(pr, r, -q)
                        # remainder becomes the new, smaller pivot
                        row_op(r, pr, 1)
                        pv = a.value(pr, pc)
                        again = True
                        break
            # clear the pivot row with col ops
            again = True
            cleared = True
            while again:
                again = False
                for c in sorted(set(a.row.get(pr, {})) - {pc}):
                    v = a.value(pr, c)
                    if v == 0:
                        continue
                    q = v // pv
                    if v % pv == 0:
                        col_op(pc, c, -q)
                    else:
                        col_op(pc, c, -q)
                        col_op(c, pc, 1)
                        pv = a.value(pr, pc)
                        again = True
                        break
            # column may have been refilled by the col ops
            if set(a.col.get(pc, set())) - {pr}:
                continue
            if set(a.row.get(pr, {})) - {pc}:
                continue
            break

        pv = a.value(pr, pc)
        if abs(pv) != 1:
            # divisibility absorption: fold in any entry pv fails to divide
            offender = None
            for r, rr in a.row.items():
                if r == pr:
                    continue
                for c, v in rr.items():
                    if v % pv != 0:
                        offender = (r, c)
                        break
                if offender:
                    break
            if offender:
                row_op(offender[0], pr, 1)
                continue  # re-run elimination with the enlarged pivot row
        if pv < 0:
            a.negate_row(pr)
            _t_negate_row(L, pr)
            _t_negate_col(Li, pr)
            pv = -pv
        pivots.append((pr, pc, pv))
        a.set(pr, pc, 0)

    # permute pivots into leading diagonal position
    diagonal = tuple(v for (_, _, v) in pivots)
    left = right = left_inv = right_inv = None
    if want_transforms:
        rperm = {r: i for i, (r, _, _) in enumerate(pivots)}
        nxt = len(pivots)
        for r in range(m.rows):
            if r not in rperm:
                rperm[r] = nxt
                nxt += 1
        cperm = {c: i for i, (_, c, _) in enumerate(pivots)}
        nxt = len(pivots)
        for c in range(m.cols):
            if c not in cperm:
                cperm[c] = nxt
                nxt += 1
        left = SparseIntegerMatrix(m.rows, m.rows)
        for r, rr in L.row.items():
            for c, v in rr.items():
                left.entries[(rperm[r], c)] = v
        left_inv = SparseIntegerMatrix(m.rows, m.rows)
        for r, rr in Li.row.items():
            for c, v in rr.items():
                left_inv.entries[(r, rperm[c])] = v
        right = SparseIntegerMatrix(m.cols, m.cols)
        for r, rr in R.row.items():
            for c, v in rr.items():
                right.entries[(r, cperm[c])] = v
        right_inv = SparseIntegerMatrix(m.cols, m.cols)
        for r, rr in Ri.row.items():
            for c, v in rr.items():
                right_inv.entries[(cperm[r], c)] = v
    return SmithForm(
        rows=m.rows,
        cols=m.cols,
        diagonal=diagonal,
        left=left,
        right=right,
        left_inv=left_inv,
        right_inv=right_inv,
    )

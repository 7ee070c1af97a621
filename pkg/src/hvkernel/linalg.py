"""Sparse exact linear algebra over Q.

Rows are dicts ``column -> Fraction``.  Columns are ints ``0..ncols-1``.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["Echelon", "kernel", "kernel_sparse", "rank", "solve_in_span"]


class Echelon:
    """Incrementally built row-echelon form.

    Each stored row has its pivot at its smallest column and is kept monic there.
    """

    def __init__(self):
        self.pivots = {}   # pivot column -> row dict

    def reduce(self, row):
        row = {c: Fraction(v) for c, v in row.items() if v}
        pivots = self.pivots
        while True:
            hits = [c for c in row if c in pivots]
            if not hits:
                return row
            c = min(hits)
            f = row[c]
            for k, v in pivots[c].items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)

    def add(self, row):
        """Insert a row; return True if it increased the rank."""
        row = self.reduce(row)
        if not row:
            return False
        c = min(row)
        inv = 1 / row[c]
        self.pivots[c] = {k: v * inv for k, v in row.items()}
        return True

    @property
    def rank(self):
        return len(self.pivots)

    def null_space(self, ncols):
        """Basis of {x : row.x = 0 for all rows}, each as a dict col -> Fraction."""
        piv = sorted(self.pivots, reverse=True)
        free = [c for c in range(ncols) if c not in self.pivots]
        out = []
        for f in free:
            x = {f: Fraction(1)}
            for c in piv:
                if c > f:
                    # only columns >= c occur in this row; all of them are zero unless
                    # they were set, and nothing above f is ever set except pivots < f
                    continue
                s = 0
                for k, v in self.pivots[c].items():
                    if k != c and k in x:
                        s += v * x[k]
                if s:
                    x[c] = -s
            out.append(x)
        return out


def kernel_sparse(rows, ncols):
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return ech.null_space(ncols)


def kernel(matrix):
    """Null space of a dense matrix (list of rows) as a list of dense vectors."""
    matrix = [list(r) for r in matrix]
    ncols = len(matrix[0]) if matrix else 0
    rows = [{j: Fraction(v) for j, v in enumerate(r) if v} for r in matrix]
    vecs = kernel_sparse(rows, ncols)
    return [[x.get(j, Fraction(0)) for j in range(ncols)] for x in vecs]


def rank(matrix):
    ech = Echelon()
    for r in matrix:
        ech.add({j: v for j, v in enumerate(r) if v})
    return ech.rank


def solve_in_span(vectors, target):
    """Coefficients a with sum a_i vectors[i] == target, or None.

    Vectors and target are dicts keyed by arbitrary hashable labels.
    """
    labels = {}
    for vec in list(vectors) + [target]:
        for k in vec:
            labels.setdefault(k, len(labels))
    n = len(vectors)
    # unknowns are columns 0..n-1, the right-hand side is column n (kept last)
    rows = []
    for lab, j in labels.items():
        row = {i: vec[lab] for i, vec in enumerate(vectors) if vec.get(lab)}
        t = target.get(lab, 0)
        if t:
            row[n] = -t
        if row:
            rows.append(row)
    # x = (a, 1) must be in the kernel of the augmented system
    ech = Echelon()
    for r in rows:
        ech.add(r)
    if n in ech.pivots:
        return None
    x = {n: Fraction(1)}
    for c in sorted(ech.pivots, reverse=True):
        s = sum(v * x[k] for k, v in ech.pivots[c].items() if k != c and k in x)
        if s:
            x[c] = -s
    return [x.get(i, Fraction(0)) for i in range(n)]

"""Integer lattice utilities: column reduction, quotient maps, membership.

`column_reduce` brings a generating set of a sublattice of Z^dim into a
column-Hermite shape.  When every pivot is 1 the quotient Z^dim / lattice is
free and the reduction provides exact integer coordinates on it (the map `Q`),
whose kernel is precisely the lattice; this is the workhorse for computing
graded quotients and canonical forms.
"""

from __future__ import annotations


class ColumnReduction:
    """Reduced basis of a sublattice of Z^dim.

    Attributes:
        dim: ambient dimension.
        pivots: list of (row, value) in increasing row order.
        basis: reduced basis columns, basis[k] has its pivot at pivots[k][0].
        nonpivot_rows: rows carrying the free quotient coordinates.
        unit_pivots: True iff every pivot value is 1 (quotient is free).
    """

    def __init__(self, dim, pivots, basis):
        self.dim = dim
        self.pivots = pivots
        self.basis = basis
        pivset = {r for r, _ in pivots}
        self.nonpivot_rows = [i for i in range(dim) if i not in pivset]
        self.unit_pivots = all(v == 1 for _, v in pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def quotient_rank(self) -> int:
        return self.dim - len(self.pivots)

    def reduce(self, vec):
        """Subtract basis columns to clear pivot coordinates (loses divisibility
        remainders when pivots are not 1; use `contains` for membership)."""
        v = list(vec)
        for (r, val), col in zip(self.pivots, self.basis):
            q = v[r] // val
            if q:
                for i, c in enumerate(col):
                    if c:
                        v[i] -= q * c
        return v

    def contains(self, vec) -> bool:
        """Exact lattice membership."""
        v = list(vec)
        for (r, val), col in zip(self.pivots, self.basis):
            if v[r] % val:
                return False
            q = v[r] // val
            if q:
                for i, c in enumerate(col):
                    if c:
                        v[i] -= q * c
        return not any(v)

    def quotient_coords(self, vec):
        """Coordinates of vec in the free quotient Z^dim / lattice.

        Requires unit pivots; the kernel of this map is exactly the lattice.
        """
        if not self.unit_pivots:
            raise ValueError("quotient is not free: non-unit pivot present")
        v = self.reduce(vec)
        return [v[i] for i in self.nonpivot_rows]


def column_reduce(vectors, dim) -> ColumnReduction:
    """Column-style Hermite reduction of the lattice spanned by `vectors`."""
    cols = [list(v) for v in vectors if any(v)]
    pivots = []
    basis = []
    for prow in range(dim):
        live = [c for c in cols if c[prow] != 0]
        if not live:
            continue
        # gcd-collapse all columns with a nonzero entry at prow into one pivot
        while True:
            live.sort(key=lambda c: abs(c[prow]))
            piv = live[0]
            done = True
            for c in live[1:]:
                q = c[prow] // piv[prow]
                if q:
                    for i in range(dim):
                        c[i] -= q * piv[i]
                if c[prow]:
                    done = False
            live = [c for c in live if c[prow] != 0]
            if done or len(live) == 1:
                break
        piv = live[0]
        cols = [c for c in cols if c is not piv and any(c)]
        if piv[prow] < 0:
            piv = [-x for x in piv]
        # clear this row in the remaining columns and in the earlier basis
        for c in cols:
            q = c[prow] // piv[prow]
            if q:
                for i in range(dim):
                    c[i] -= q * piv[i]
        for b in basis:
            q = b[prow] // piv[prow]
            if q:
                for i in range(dim):
                    b[i] -= q * piv[i]
        cols = [c for c in cols if any(c)]
        pivots.append((prow, piv[prow]))
        basis.append(piv)
    return ColumnReduction(dim, pivots, basis)

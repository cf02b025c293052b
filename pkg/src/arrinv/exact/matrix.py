"""Dense arbitrary-precision integer matrices and exact linear solvers.

The solver pipeline factors every system through a sparse elimination phase
that only ever pivots on +-1 entries (exact row operations, no growth of the
solution set), followed by a small dense core handled by Hermite/Smith normal
forms.  This decides rational and integer feasibility exactly, produces
witnesses, integer kernel bases, and the set of primes obstructing local
solvability.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

# 62-bit prime used for seeded generic-rank estimation (= nextprime(2^62)).
GENERIC_RANK_PRIME = 4611686018427388039


class IntMatrix:
    """Dense integer matrix; entries are Python ints (arbitrary precision)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        self.entries = [list(map(int, row)) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(row) != self.cols for row in self.entries):
            raise ValueError("ragged matrix")

    @classmethod
    def zero(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def copy(self):
        return IntMatrix(self.entries)

    def transpose(self):
        return IntMatrix([[self.entries[i][j] for i in range(self.rows)]
                          for j in range(self.cols)])

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = other.transpose().entries
        return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in ot]
                          for row in self.entries])

    def mul_vec(self, v):
        return [sum(a * b for a, b in zip(row, v)) for row in self.entries]

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.entries == other.entries

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols})"

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[str(x) for x in row] for row in self.entries]}

    @classmethod
    def from_json(cls, d: dict) -> "IntMatrix":
        m = cls([[int(x) for x in row] for row in d["entries"]])
        if m.rows != d["rows"] or m.cols != d["cols"]:
            raise ValueError("inconsistent matrix header")
        return m


def bareiss_det(entries) -> int:
    """Fraction-free determinant (small matrices)."""
    a = [row[:] for row in entries]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(m: IntMatrix):
    """Return (factors, U, V) with U*M*V diagonal with divisibility chain.

    U, V are unimodular; `factors` is the list of nonzero invariant factors.
    """
    a = [row[:] for row in m.entries]
    rows, cols = m.rows, m.cols
    U = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    V = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def row_op(i, j, q):  # row_i -= q * row_j
        ai, aj = a[i], a[j]
        for k in range(cols):
            ai[k] -= q * aj[k]
        ui, uj = U[i], U[j]
        for k in range(rows):
            ui[k] -= q * uj[k]

    def col_op(i, j, q):  # col_i -= q * col_j
        for row in a:
            row[i] -= q * row[j]
        for row in V:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    t = 0
    n = min(rows, cols)
    while t < n:
        # locate minimal nonzero entry in the trailing block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[2]):
                    best = (i, j, abs(x))
        if best is None:
            break
        bi, bj, _ = best
        swap_rows(t, bi)
        swap_cols(t, bj)
        dirty = False
        for i in range(t + 1, rows):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                if q:
                    row_op(i, t, q)
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, cols):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                if q:
                    col_op(j, t, q)
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        # ensure divisibility of the trailing block by the pivot
        piv = a[t][t]
        fix = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % piv:
                    fix = i
                    break
            if fix is not None:
                break
        if fix is not None:
            row_op(t, fix, -1)  # add row `fix` into row t, then redo
            continue
        if piv < 0:
            for k in range(cols):
                a[t][k] = -a[t][k]
            for k in range(rows):
                U[t][k] = -U[t][k]
        t += 1

    factors = [a[i][i] for i in range(min(rows, cols)) if a[i][i] != 0]
    return factors, IntMatrix(U), IntMatrix(V)


def _factor_small(n: int):
    n = abs(n)
    out = set()
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


@dataclass
class LinearSolveReport:
    """Outcome of the exact solve of A x = b over Q and Z."""
    n_vars: int
    rank: int
    rational_feasible: bool
    integer_feasible: bool
    obstructing_primes: frozenset
    witness: list | None
    kernel: list        # list of integer kernel basis vectors
    residual_checked: bool = False

    @property
    def rational_dimension(self) -> int | None:
        return self.n_vars - self.rank if self.rational_feasible else None


def solve_linear_system(rows, rhs) -> LinearSolveReport:
    """Exact solve of (rows) x = rhs over Z, with rational fallback data.

    rows: list of integer lists (may be empty); rhs: integer list.
    Unit-pivot elimination first, then HNF/SNF on the small remaining core.
    """
    nvars = len(rows[0]) if rows else 0
    m = len(rows)
    if len(rhs) != m:
        raise ValueError("rhs length mismatch")

    # sparse augmented rows: dict col -> coeff, key "b" separate
    srows = []
    for row, b in zip(rows, rhs):
        d = {j: v for j, v in enumerate(row) if v}
        if d or b:
            srows.append((d, b))

    # phase 1: eliminate with +-1 pivots; record for back-substitution
    colindex = {}
    for ri, (d, _) in enumerate(srows):
        for c in d:
            colindex.setdefault(c, set()).add(ri)
    alive = set(range(len(srows)))
    stack = []  # (col, row dict, b) in elimination order

    def pick_pivot():
        best = None
        for ri in alive:
            d, _ = srows[ri]
            for c, v in d.items():
                if v == 1 or v == -1:
                    score = (len(d) - 1) * (len(colindex.get(c, ())) - 1)
                    key = (score, ri, c)
                    if best is None or key < best[0]:
                        best = (key, ri, c)
            if best and best[0][0] == 0:
                break
        return best

    while True:
        got = pick_pivot()
        if got is None:
            break
        _, pri, pc = got
        pd, pb = srows[pri]
        s = pd[pc]
        if s < 0:
            pd = {c: -v for c, v in pd.items()}
            pb = -pb
        for ri in list(colindex.get(pc, ())):
            if ri == pri or ri not in alive:
                continue
            d, b = srows[ri]
            f = d.get(pc, 0)
            if not f:
                continue
            nd = dict(d)
            for c, v in pd.items():
                nv = nd.get(c, 0) - f * v
                if nv:
                    nd[c] = nv
                    colindex.setdefault(c, set()).add(ri)
                else:
                    nd.pop(c, None)
                    s2 = colindex.get(c)
                    if s2:
                        s2.discard(ri)
            srows[ri] = (nd, b - f * pb)
            if not nd and srows[ri][1] == 0:
                alive.discard(ri)
        alive.discard(pri)
        for c in pd:
            s2 = colindex.get(c)
            if s2:
                s2.discard(pri)
        stack.append((pc, pd, pb))

    eliminated_cols = {c for c, _, _ in stack}
    rank = len(stack)

    # assemble the core
    core = []
    for ri in sorted(alive):
        d, b = srows[ri]
        if d or b:
            core.append((dict(d), b))
    core_cols = sorted({c for d, _ in core for c in d})
    cidx = {c: k for k, c in enumerate(core_cols)}
    nc = len(core_cols)

    rational_feasible = True
    integer_feasible = True
    primes: set = set()
    core_solution_q = None
    core_solution_z = None
    kernel_core: list = []

    if core:
        A = [[0] * nc for _ in core]
        bb = []
        for i, (d, b) in enumerate(core):
            for c, v in d.items():
                A[i][cidx[c]] = v
            bb.append(b)

        # column HNF with transform V; pivot per row in order
        V = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]
        H = [row[:] for row in A]
        mrows = len(H)
        pivots = []  # (row, col)
        pivot_cols = set()

        def hcol_op(i, j, q):  # col_i -= q col_j
            for row in H:
                row[i] -= q * row[j]
            for row in V:
                row[i] -= q * row[j]

        def hcol_swap(i, j):
            for row in H:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]

        for r0 in range(mrows):
            active = [j for j in range(nc) if j not in pivot_cols and H[r0][j]]
            if not active:
                continue
            # gcd-reduce the active entries of this row into a single column
            while len(active) > 1:
                active.sort(key=lambda j: (abs(H[r0][j]), j))
                j0 = active[0]
                rest = []
                for j in active[1:]:
                    q = H[r0][j] // H[r0][j0]
                    if q:
                        hcol_op(j, j0, q)
                    if H[r0][j]:
                        rest.append(j)
                active = [j0] + rest
            j0 = active[0]
            if H[r0][j0] < 0:
                for row in H:
                    row[j0] = -row[j0]
                for row in V:
                    row[j0] = -row[j0]
            pivots.append((r0, j0))
            pivot_cols.add(j0)

        rank += len(pivots)

        # forward solve in pivot order (rational and integer in parallel)
        yq = [Fraction(0)] * nc
        yz: list | None = [0] * nc
        pivot_rows = {r for r, _ in pivots}
        for (r0, j0) in pivots:
            acc_q = Fraction(bb[r0])
            acc_z = bb[r0]
            row = H[r0]
            for (r1, j1) in pivots:
                if j1 != j0 and row[j1]:
                    acc_q -= row[j1] * yq[j1]
                    if yz is not None:
                        acc_z -= row[j1] * yz[j1]
            yq[j0] = acc_q / row[j0]
            if yz is not None:
                if acc_z % row[j0] == 0:
                    yz[j0] = acc_z // row[j0]
                else:
                    yz = None
        for i in range(mrows):
            if i in pivot_rows:
                continue
            acc = Fraction(bb[i])
            for (r1, j1) in pivots:
                if H[i][j1]:
                    acc -= H[i][j1] * yq[j1]
            if acc != 0:
                rational_feasible = False
                break

        if rational_feasible:
            core_solution_q = [sum(Fraction(V[i][j]) * yq[j] for j in range(nc))
                               for i in range(nc)]
            if yz is not None:
                core_solution_z = [sum(V[i][j] * yz[j] for j in range(nc))
                                   for i in range(nc)]
            else:
                integer_feasible = False
        else:
            integer_feasible = False

        for j in range(nc):
            if j not in pivot_cols:
                kernel_core.append([V[i][j] for i in range(nc)])

        # obstructing primes from the Smith form of the core
        if rational_feasible and not integer_feasible:
            factors, U, _ = smith_normal_form(IntMatrix(A))
            c = U.mul_vec(bb)
            for i, d in enumerate(factors):
                ci = c[i]
                g = gcd(d, ci)
                bad = abs(d) // g if g else abs(d)
                if bad > 1:
                    primes |= _factor_small(bad)
    else:
        # no core: everything eliminated with unit pivots
        pass

    witness = None
    kernel: list = []
    if rational_feasible:
        # lift core solution and kernel through the elimination stack
        def lift(vec_core, bvals=True):
            x = [0] * nvars
            for c, v in zip(core_cols, vec_core):
                x[c] = v
            for (pc, pd, pb) in reversed(stack):
                acc = (pb if bvals else 0)
                for c, v in pd.items():
                    if c != pc:
                        acc -= v * x[c]
                x[pc] = acc  # pivot coefficient is +1 after normalization
            return x

        if integer_feasible:
            witness = lift(core_solution_z if core else [])
        for kv in kernel_core:
            kernel.append(lift(kv, bvals=False))
        free_cols = [c for c in range(nvars)
                     if c not in eliminated_cols and c not in cidx]
        for c in free_cols:
            unit = [0] * nvars
            unit[c] = 1
            for (pc, pd, pb) in reversed(stack):
                acc = 0
                for cc, v in pd.items():
                    if cc != pc:
                        acc -= v * unit[cc]
                unit[pc] = acc
            kernel.append(unit)

    residual_checked = False
    if witness is not None:
        for row, b in zip(rows, rhs):
            if sum(a * x for a, x in zip(row, witness)) != b:
                raise AssertionError("witness residual check failed")
        residual_checked = True

    return LinearSolveReport(
        n_vars=nvars,
        rank=rank,
        rational_feasible=rational_feasible,
        integer_feasible=integer_feasible and rational_feasible,
        obstructing_primes=frozenset(primes),
        witness=witness,
        kernel=kernel,
        residual_checked=residual_checked,
    )


def hermite_solve(a: IntMatrix, b):
    """Decide A x = b over Z.  Returns None if infeasible over Z, else
    (solution, kernel_basis) with an exact residual check performed."""
    rep = solve_linear_system(a.entries, list(b))
    if not rep.integer_feasible:
        return None
    return rep.witness, rep.kernel


def rational_solution_dim(a: IntMatrix, b):
    """Dimension of {x in Q^n : A x = b}, or None when inconsistent."""
    rep = solve_linear_system(a.entries, list(b))
    return rep.rational_dimension


def local_feasibility(a: IntMatrix, b) -> frozenset:
    """Primes p such that A x = b has no solution over Z localized at p.

    Raises ValueError when the system is rationally inconsistent.
    Empty set iff the system is integrally feasible.
    """
    rep = solve_linear_system(a.entries, list(b))
    if not rep.rational_feasible:
        raise ValueError("system is rationally infeasible")
    return rep.obstructing_primes


def rank_mod_p(rows, p=GENERIC_RANK_PRIME) -> int:
    """Gaussian elimination rank over Z/p (p prime)."""
    a = [[x % p for x in row] for row in rows if any(row)]
    if not a:
        return 0
    ncols = len(a[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][col], -1, p)
        arow = a[rank]
        for i in range(len(a)):
            if i != rank and a[i][col]:
                f = a[i][col] * inv % p
                a[i] = [(x - f * y) % p for x, y in zip(a[i], arow)]
        rank += 1
        if rank == len(a):
            break
    return rank


@dataclass
class GenericRankReport:
    lower: int          # max rank over the random trials (Schwartz-Zippel lower bound)
    upper: int          # trivial bound min(rows, cols)
    trial_ranks: list = field(default_factory=list)
    seed: int = 0


def generic_rank(base: IntMatrix, directions, seed=0, trials=8) -> GenericRankReport:
    """Seeded generic rank of the affine family base + sum_l t_l * directions[l].

    Each trial specializes the parameters uniformly mod a fixed 62-bit prime
    and measures the rank mod that prime; the maximum is a lower bound for the
    generic rank, and any specialization's rank never exceeds it.
    """
    rng = random.Random(seed)
    p = GENERIC_RANK_PRIME
    ranks = []
    if not directions:
        trials = 1
    for _ in range(trials):
        coeffs = [rng.randrange(p) for _ in directions]
        rows = [row[:] for row in base.entries]
        for t, d in zip(coeffs, directions):
            for i in range(base.rows):
                drow = d.entries[i]
                row = rows[i]
                for j in range(base.cols):
                    if drow[j]:
                        row[j] += t * drow[j]
        ranks.append(rank_mod_p(rows, p))
    return GenericRankReport(lower=max(ranks), upper=min(base.rows, base.cols),
                             trial_ranks=ranks, seed=seed)

"""Exact arithmetic and integer linear algebra.

Rationals are `fractions.Fraction`; `CycloNumber` implements Q(w) with
w^2 + w + 1 = 0; `SqrtThreeReal` implements the ordered field Q(sqrt 3)
used for real/imaginary parts.  Integer matrices come with Smith/Hermite
normal forms, exact feasibility of linear systems over Z and Q, local
obstruction primes, and seeded generic-rank estimation for affine matrix
families.
"""

from .numbers import CycloNumber, SqrtThreeReal, CYCLO_ZERO, CYCLO_ONE, OMEGA, I_SQRT3
from .matrix import (
    IntMatrix,
    smith_normal_form,
    hermite_solve,
    rational_solution_dim,
    local_feasibility,
    generic_rank,
    solve_linear_system,
    LinearSolveReport,
    GENERIC_RANK_PRIME,
)
from .lattice import ColumnReduction, column_reduce

__all__ = [
    "CycloNumber", "SqrtThreeReal", "CYCLO_ZERO", "CYCLO_ONE", "OMEGA", "I_SQRT3",
    "IntMatrix", "smith_normal_form", "hermite_solve", "rational_solution_dim",
    "local_feasibility", "generic_rank", "solve_linear_system", "LinearSolveReport",
    "GENERIC_RANK_PRIME", "ColumnReduction", "column_reduce",
]

"""Sparse recovery by minimising the q-ratio sparsity ``(||z||_1/||z||_q)^(q/(q-1))``."""

# re-exported public API

from .model import (
    RecoveryProblem,
    SolveReport,
    Termination,
    derive_seed,
    format_q,
    parse_q,
    read_matrix,
    read_vector,
    toy_problem,
    write_matrix,
    write_vector,
)
from .solvers import (
    METHODS,
    SolverOptions,
    bpdn_solve,
    ccp_solve,
    dca_solve_Q,
    f_value,
    l1_minus_l2_solve,
    lp_solve_linf,
    pm_solve,
    solve,
)
from .sparsity import q_ratio_sparsity

__version__ = "0.1.0"

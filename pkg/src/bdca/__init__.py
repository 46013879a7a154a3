"""DCA and Boosted DCA for linearly constrained quadratic DC programs."""

from .applications import (CopositivityTag, CopositivityVerdict, TrInstance,
                           copositivity_problem, cycle_adjacency, horn_family,
                           quad_form, random_box_start,
                           random_orthant_ball_start, random_tr_instance,
                           solve_tr, test_copositivity, tr_problem)
from .constraints import (Box, Halfspaces, NonnegOrthant, ProjectionError,
                          Simplex, is_feasible_direction)
from .kkt import KktReport, attach_kkt, kkt_residual
from .model import (QuadraticDcProblem, SolverConfig, SpectralEstimate,
                    as_symmetric_matrix, build_problem, estimate_lambda_max,
                    grad_g, grad_h, phi_value)
from .solver import (IterationRecord, SolveResult, SolveStatus, StepSizeState,
                     adaptive_trial_step, dca_step, line_search, run_bdca,
                     run_dca)

__version__ = '0.1.0'

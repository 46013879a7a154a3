"""Copositivity testing on the cycle-graph matrix family.

The matrix mu*(E - A_cycle) - E is copositive exactly when mu >= 2 (mu = 2
is the Horn matrix). Minimizing <Ax, x> over the nonnegative orthant from
many random starts either finds a negative value (a certificate of
non-copositivity) or leaves the matrix undecided.
"""

import time

import numpy as np

from bdca import (CopositivityTag, horn_family, quad_form, test_copositivity)

n = 100

# mu = 2: the Horn matrix. Copositive, so every run ends at a critical point
# with a nonnegative value and the heuristic stays undecided.
H = horn_family(n, 2.0)
verdict = test_copositivity(H, n_starts=25, seed=0)
phis = [phi for (_, phi, _) in verdict.critical_points]
print(f'mu = 2.0 (Horn): {verdict.tag.value}, '
      f'critical values in [{min(phis):.2e}, {max(phis):.2e}]')
assert verdict.tag is CopositivityTag.UNDECIDED

# mu = 1.9: barely inside the non-copositive regime; the heuristic finds a
# witness direction with a strictly negative quadratic form.
A = horn_family(n, 1.9)
verdict = test_copositivity(A, n_starts=25, seed=0)
print(f'mu = 1.9: {verdict.tag.value}, witness value = {verdict.witness_phi:.4e}')
assert verdict.tag is CopositivityTag.NON_COPOSITIVE
w = verdict.witness
print(f'witness re-check: <Aw, w> = {quad_form(A, w):.4e}, min(w) = {w.min():.1e}')

# A small paired timing comparison, DCA versus BDCA from the same starts.
from bdca import (SolverConfig, copositivity_problem,
                  random_orthant_ball_start, run_bdca, run_dca)

problem = copositivity_problem(H)
cfg = SolverConfig(d_tol=1e-9)
ratios = []
for i in range(5):
    x0 = random_orthant_ball_start(n, 100 + i)
    t0 = time.perf_counter(); run_dca(problem, x0, cfg); td = time.perf_counter() - t0
    t0 = time.perf_counter(); run_bdca(problem, x0, cfg); tb = time.perf_counter() - t0
    ratios.append(td / tb)
print(f'time ratios DCA/BDCA over 5 starts: '
      f'{", ".join(f"{r:.1f}" for r in ratios)} (median {np.median(ratios):.1f})')

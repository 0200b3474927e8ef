"""Golden-ratio Bregman FBF vs the fixed-step baseline on the ball problem.

The operator F(x) = (b - ||x||) x is quasimonotone on the ball of radius a
(a finite truncation of the square-summable sequence setting), and the
origin is the unique dual solution.  For each (a, b) case both solvers run
until the displacement drops below 1e-5.

Run:  python demos/ball_benchmark.py
"""

import numpy as np

from qvi import discrete_ergodic_average, sampled_quasimonotonicity_check, example_5_2
from qvi.harness import CASE_PARAMS_5_2, run_example_5_2

report = sampled_quasimonotonicity_check(example_5_2(), sample_count=10_000, seed=0)
print(
    f"quasimonotonicity spot check (case I operator): "
    f"{report.violations} violations in {report.sample_count} sampled pairs"
)
print()
print("case   (a, b)     solver   iterations   final ||x||   stop")
for case, (a, b) in CASE_PARAMS_5_2.items():
    res = run_example_5_2(case)
    for row in res.table.rows:
        trace = res.traces[(case, row.solver)]
        print(
            f"{case:<6} ({a:g}, {b:g})   {row.solver:<8} {row.iterations:<12} "
            f"{row.final_error:<13.2e} {trace.stop_reason.value}"
        )

print()
print("notes: the adaptive-step solver converges in every case; the fixed-step")
print("baseline is quick on the mild cases but stalls at the iteration cap on")
print("case IV, where lambda = 0.15 exceeds its stable range near the solution.")

res = run_example_5_2("I", solvers=("alg1",))
trace = res.traces[("I", "alg1")]
avg = discrete_ergodic_average(trace)
print(f"\nunweighted average of the case-I iterates: ||xbar|| = {np.linalg.norm(avg):.3f}")
print(f"final step size lambda_k = {trace.lams[-1]:.4f} (started at 0.15, grew by the eta budget)")

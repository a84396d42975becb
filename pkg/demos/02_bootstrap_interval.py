# Bootstrap uncertainty for the selected interval
#
# An interval of fixed length is a ball B(t, r): the radius r follows from
# c, so only the center t is uncertain. Resampling curves within each group
# and rerunning the search gives a bootstrap distribution of t; its
# percentile interval, widened by r, is a confidence set for the interval.
#
# Run:  python3 demos/02_bootstrap_interval.py [B]

import sys

import numpy as np

from localkl import bootstrap_centers, ci_center, confidence_set
from localkl.inference import distinct_centers
from localkl.simulate import DEFAULT_ETA, make_scenario, sample_scenario

B = int(sys.argv[1]) if len(sys.argv) > 1 else 200

spec = make_scenario("B", p=100, seed=4)
dx, dy = sample_scenario(spec, 100, 100)
h = spec.grid.spacing

for c in (0.1, 0.2, 0.3):
    res = bootstrap_centers(dx, dy, c, B=B, seed=2024, eta=DEFAULT_ETA)
    lo, hi = ci_center(res)
    set_lo, set_hi = confidence_set(res)
    print(
        f"c={c:.1f}: point center {res.point_estimate.center_index:5.1f}, "
        f"95% CI for the center [{lo / h:5.1f}, {hi / h:5.1f}], "
        f"confidence set [{set_lo / h:5.1f}, {set_hi / h:5.1f}] (grid points), "
        f"{res.n_failed} failed replicates"
    )

# Longer windows leave fewer places to go: p - k + 1 distinct centers.
print("distinct centers:", {c: distinct_centers(c, spec.grid) for c in (0.1, 0.5, 0.9, 1.0)})

# A histogram of the last run, in grid points.
counts, edges = np.histogram(res.centers / h, bins=10)
for n_, e in zip(counts, edges):
    print(f"{e:6.1f} {'*' * n_}")

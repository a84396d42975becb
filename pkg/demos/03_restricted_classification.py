# Classification on the selected interval
#
# Once an interval is chosen, quadratic discriminant analysis on that
# window alone can beat the same classifier on the full domain: fewer
# covariance entries to estimate, and no noise from uninformative points.
# The length fraction c is picked by repeated random train/test splits.
#
# Run:  python3 demos/03_restricted_classification.py

import numpy as np

from localkl import Grid, LabeledSamples, SampleSet, select_c_cv

# Curves that differ only on points 20-29 of 60, plus independent noise.
rng = np.random.default_rng(3)
g = Grid.indices(60)
x = rng.standard_normal((40, 60))
x[:, 20:30] += 1.0
y = rng.standard_normal((40, 60))
data = LabeledSamples.from_groups(SampleSet(g, x), SampleSet(g, y))

cs = [0.1, 0.15, 0.25, 0.5, 1.0]
res = select_c_cv(data, cs, split_fraction=0.5, B=50, seed=0, eta=0.9)
for c, err in zip(res.c_candidates, res.mean_errors):
    print(f"c={c:4.2f}  mean test error {err:.3f}")
print("chosen c:", res.best_c)

# Which windows did the first few splits choose at the chosen c?
i = list(res.c_candidates).index(res.best_c)
for split in res.windows[:5]:
    w = split[i]
    print(f"  window {w.start}-{w.end}")

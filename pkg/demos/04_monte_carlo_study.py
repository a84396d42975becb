# Monte Carlo study: consistency and cost of the interval search
#
# For each scenario we draw M datasets, estimate the interval for every c
# on a uniform grid, and average the Jaccard distance to the population
# interval over c (AIJD). Larger samples should give smaller AIJD.
# Timings cover the search only; estimation is done beforehand.
#
# Run:  python3 demos/04_monte_carlo_study.py --M 20 --n 50 1000 --p 100
# The same tables come from:  localkl bench --out results/

import argparse
import time

from localkl.simulate import make_scenario, monte_carlo_run, timing_benchmark

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--M", type=int, default=20)
parser.add_argument("--n", type=int, nargs="+", default=[50, 1000])
parser.add_argument("--p", type=int, nargs="+", default=[100])
parser.add_argument("--seed", type=int, default=0)
args = parser.parse_args()

t0 = time.perf_counter()
rep = monte_carlo_run("ABC", args.n, args.p, args.M, seed=args.seed)
print(f"{len(rep.rows)} replicates in {time.perf_counter() - t0:.1f} s")
for row in rep.summary():
    print("{scenario} n={n:5d} p={p:4d}  median AIJD {median:.3f}  (IQR {q1:.3f}-{q3:.3f})".format(**row))

# Search time for c = 0.1 as n grows: it should stay flat.
for n in (50, 250, 1000):
    [(*_, sec)] = timing_benchmark(make_scenario("A"), n, 500, [0.1], repeats=3)
    print(f"p=500, n={n:4d}, c=0.1: {sec:.3f} s")

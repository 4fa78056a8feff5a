"""
Relative performance at a glance
================================

Time the samplers against each other and against the naive non-streaming
baseline (cumulative weights + binary searches over the materialized
population).  Absolute numbers depend on your machine; the stable story
is ordinal:

- the skip sampler beats the priority-queue sampler, and the gap widens
  when late items carry more weight (more substitutions, each costing the
  heap O(log m));
- against the materialized baseline, the skip sampler wins while the
  sample is a small fraction of the population and stops winning as the
  ratio approaches one half.
"""

import io

from streamsample.bench import BenchScenario, run_bench, write_csv

# Desk-scale sweep; bump n and the sizes for a serious run.
scenario = BenchScenario(
    n=200_000,
    sample_sizes=[200, 2_000, 20_000, 100_000],
    weight_structure="constant",
    algorithms=["heap", "skip", "baseline"],
    repetitions=5,
    seed=42,
)

rows = run_bench(scenario)

buf = io.StringIO()
write_csv(rows, buf)
print(buf.getvalue())

print("medians by sample ratio (milliseconds):")
print(f"{'ratio':>8} {'heap':>9} {'skip':>9} {'baseline':>9}")
by_m = {}
for row in rows:
    by_m.setdefault(row["m"], {})[row["algorithm"]] = row["median_seconds"] * 1e3
for m, medians in sorted(by_m.items()):
    print(f"{m / scenario.n:>8} {medians['heap']:>9.2f} {medians['skip']:>9.2f} "
          f"{medians['baseline']:>9.2f}")

# The same sweep is scriptable from the shell:
#   streamsample bench --n 1000000 --m 1000,10000,100000 --output bench.csv

"""Cost of joint versus per-network simulation.

The joint statevector grows with the product of network sizes; running each
network on its own grows with their sum. Timings are for this classical
simulator only.
"""

from qisorank.bench import format_csv, run_bench

print(format_csv(run_bench(sizes=(4, 8, 12, 16), m=2, repetitions=3)), end="")
print(format_csv(run_bench(sizes=(4, 6, 8), m=3, repetitions=3)), end="")

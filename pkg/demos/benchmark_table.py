"""
Benchmark grid
==============

Runs the two-view synthetic benchmark (50 shared samples, views of 80 and 100
features, joint rank 4, individual ranks 5 and 4) over angles, noise levels,
and rank-specification modes, reporting mean F-scores scaled by 10.

By default each cell uses 10 replications to stay quick; pass ``--full`` for
the 50-replication version (several minutes).

    python demos/benchmark_table.py [--full]
"""

import sys

import ppdecomp as ppd

reps = 50 if "--full" in sys.argv[1:] else 10

grid = [
    ppd.SimConfig(n=50, dims=(80, 100), joint_rank=4, individual_ranks=(5, 4),
                  angle_deg=angle, snr=snr, seed=0, rank_mode=mode)
    for mode in ("estimated", "over", "under")
    for snr in (2.0, 0.5)
    for angle in (90.0, 30.0)
]

print(f"{reps} replications per cell\n")
print("rank_mode  snr   angle  mean_F_x10  stderr_x10")
for row in ppd.run_benchmark(grid, reps=reps, master_seed=42):
    print(f"{row.rank_mode:<10} {row.snr:<5} {row.angle_deg:<6g} "
          f"{row.mean_f_scaled:<11.2f} {row.stderr_scaled:.2f}")
    for failure in row.failures:
        print(f"    failed replication: {failure}")

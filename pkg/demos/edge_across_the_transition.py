"""The scaled top eigenvalue as the tail exponent crosses the critical value.

With variance-one entries and mu=1 the threshold sits at alpha=4.  Above it
lambda_1/sqrt(N) settles near 2, the semicircle edge.  Well below it
(alpha=2.5) the largest entries take over and the scaled value grows with N.
Just below it (alpha=3.5) that growth is too slow to show at these sizes.
"""

import numpy as np

from heavyband import TailLaw, build_pattern, lanczos_topk, sample_matrix

REPLICAS = 10
for alpha in (2.5, 3.5, 5.0, 8.0):
    law = TailLaw(alpha, variance_normalized=True)
    row = []
    for n in (250, 500, 1000):
        pat = build_pattern(n, 1.0)
        tops = [lanczos_topk(sample_matrix(pat, law, 11, r), 1).eigenvalues[0] for r in range(REPLICAS)]
        row.append(np.median(tops) / np.sqrt(n))
    print(f"alpha={alpha:3.1f}  " + "  ".join(f"N={n}: {x:6.3f}" for n, x in zip((250, 500, 1000), row)))

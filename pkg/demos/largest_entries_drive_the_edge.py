"""Below the critical exponent the top eigenvalues track the largest entries.

Samples one cyclic band matrix with Pareto(1.5) entries and prints, for the
three largest eigenvalues, the matching entry modulus, their ratio and how
much of the eigenvector sits on the two coordinates of that entry.
"""

from heavyband import TailLaw, build_pattern, critical_alpha, lanczos_topk, largest_entries, sample_matrix
from heavyband.localization import participation_ratio, two_coord_overlap

N, MU, ALPHA = 1000, 1.0, 1.5

m = sample_matrix(build_pattern(N, MU), TailLaw(ALPHA), seed=7)
print(f"N={N}, mu={MU}, alpha={ALPHA} (critical exponent {critical_alpha(MU):.1f})")

top = lanczos_topk(m, 3, which="largest_algebraic", tol=1e-10)
print(f"{'k':>2} {'lambda_k':>12} {'|a_ij|':>12} {'ratio':>8} {'overlap':>8} {'PR':>6}")
for k, e in enumerate(largest_entries(m, 3)):
    lam, v = top.eigenvalues[k], top.eigenvectors[:, k]
    print(
        f"{k + 1:>2} {lam:12.4f} {e.modulus:12.4f} {lam / e.modulus:8.4f}"
        f" {two_coord_overlap(v, e.i, e.j, e.sign):8.4f} {participation_ratio(v):6.2f}"
    )

"""Why the stochastic operator is read out with certainty and its Hermitian
part is not.

The equal superposition is exactly the all-ones left eigenvector of a
column-stochastic matrix, so every non-Perron eigencomponent of it cancels.
Symmetrizing the matrix breaks that, and phase estimation starts to land on
other eigenvectors.
"""

import numpy as np

from qisorank import hermitian_decompose, run_pea, stochastic_operator, success_probability
from qisorank.netio import parse_edge_list

star = parse_edge_list("c x\nc y\nc z", "star")
tri = parse_edge_list("a b\nb c\nc a\nc d", "paw")

A = stochastic_operator([star, tri])
hm = hermitian_decompose(A)

print("operator dimension:", A.dim)
print("principal success probability, stochastic A:", success_probability(A.matrix)[0])
print("principal success probability, H = (A + A^T)/2:", round(success_probability(hm.H)[0], 4))

exact = run_pea(A, t=6)
print("\nexact-stochastic run, t=6: peak bin", exact.peak_bin, "of", 2**6,
      "with mass", exact.phase_distribution[exact.peak_bin])

approx = run_pea(hm, t=6)
top = np.argsort(-approx.phase_distribution)[:4]
print("closest-Hermitian run, t=6: mass spread over bins")
for k in top:
    print(f"  bin {k:2d}: {approx.phase_distribution[k]:.4f}")
print("rho(H) bounds:", hm.rho_lower, "<= rho <=", hm.rho_upper,
      "; estimate", round(approx.recovered_eigenvalue, 4))

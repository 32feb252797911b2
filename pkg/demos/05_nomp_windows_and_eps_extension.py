# Window-based greedy selection: NOMP and the eps-extension of OMP.
#
# NOMP adds a whole window of adjacent atoms per greedy pick, which absorbs
# the correlated neighborhoods of the DFT dictionary; eps-OMP instead widens
# the support once, after plain OMP, by pulling in all atoms sufficiently
# correlated with the picks. The hybrid class (one block plus isolated
# atoms) defeats the classical solvers but not NOMP.

import numpy as np

from sigspace import (
    CoefficientDistribution,
    SeededRng,
    StructureSpec,
    build_overcomplete_dft,
    eps_extension,
    eps_omp,
    gaussian_measurement,
    generate_support,
    draw_coefficients,
    is_perfect_recovery,
    measure,
    nomp,
    synthesize,
)

M, N, D_DIM, K = 100, 256, 1024, 8
D = build_overcomplete_dft(N, 4)

# the extension of a single atom at various eps values
for eps in (0.80, 0.9539, 0.95391, 0.98):
    ext = eps_extension(D, np.array([500]), eps)
    print(f"eps = {eps:7.5f}: extension of atom 500 -> {list(map(int, ext))}")
print()

spec = StructureSpec.hybrid()
for w in (1, 2, 4, 6):
    wins = 0
    for trial in range(10):
        rng = SeededRng(7171, (trial,))
        A = gaussian_measurement(M, N, rng.child(0))
        support = generate_support(spec, K, D_DIM, rng.child(1))
        alpha = draw_coefficients(support, CoefficientDistribution("complex_gaussian"), D_DIM, rng.child(2))
        x = synthesize(D, alpha)
        y = measure(A, x, np.zeros(M))
        wins += is_perfect_recovery(x, nomp(A, D, y, K, w).x_hat)
    print(f"nomp window w={w}: hybrid perfect {10 * wins}%")

wins = 0
for trial in range(10):
    rng = SeededRng(7171, (trial,))
    A = gaussian_measurement(M, N, rng.child(0))
    support = generate_support(spec, K, D_DIM, rng.child(1))
    alpha = draw_coefficients(support, CoefficientDistribution("complex_gaussian"), D_DIM, rng.child(2))
    x = synthesize(D, alpha)
    y = measure(A, x, np.zeros(M))
    wins += is_perfect_recovery(x, eps_omp(A, D, y, K, 0.9539).x_hat)
print(f"eps_omp(0.9539):  hybrid perfect {10 * wins}%")

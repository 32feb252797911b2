# The seven structured support classes used throughout the benchmarks.
#
# Each class constrains where the k nonzero coefficients may sit; the actual
# placement is uniform over all placements satisfying the constraint.

import numpy as np

from sigspace import SeededRng, StructureSpec, generate_support, validate_support

K, D_DIM = 8, 1024
rng = SeededRng(2024)

classes = [
    StructureSpec.clustered(),
    StructureSpec.spread(),
    StructureSpec.hybrid(),
    StructureSpec.c_clusters(2),
    StructureSpec.c_clusters(4),
    StructureSpec.alternating(),
    StructureSpec.pair_spread(),
    StructureSpec.uniform_sep(3),
    StructureSpec.two_cluster_sep(5),
]

for i, spec in enumerate(classes):
    sup = generate_support(spec, K, D_DIM, rng.child(i))
    ok = validate_support(spec, sup, K, D_DIM)
    print(f"{spec.label():20s} {list(map(int, sup))}  valid={ok}")

# a zoomed ASCII picture of one draw per class
print("\nzoomed support patterns (relative to the first nonzero):")
for i, spec in enumerate(classes):
    sup = generate_support(spec, K, D_DIM, rng.child(100 + i))
    span = sup - sup[0]
    width = int(span[-1]) + 1
    row = "".join("x" if j in set(span) else "." for j in range(min(width, 70)))
    print(f"{spec.label():20s} {row}")

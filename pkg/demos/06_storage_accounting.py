"""What an eight-branch ensemble pays to store its constraints.

Three arrangements: a stable constraint shared by every branch (one
copy-rule table, priced by its dynamic count), one row-reduced
transformed matrix per branch when the permutations are known up
front, and full matrices when they are not. Only the stable row stays
flat as branches are added — that is the case the block-structured
permutation group makes possible.
"""

from rmae import build_constraint, make_spec, stable_weight_classes
from rmae.analysis import (
    STABLE,
    UNKNOWN_PERMS,
    known_perms_storage,
    memory_requirements,
)
from rmae.autgroup import lta_group, sample_group

M = 8
print(f"constraint storage in bits, M={M} branches "
      f"(known-perms: affine sample, seed 0)")
print(f"{'code':>8} {'stable':>8} {'known-perms':>22} {'unknown-perms':>14}")
for r, n in ((3, 7), (3, 8), (4, 8), (5, 8)):
    spec = make_spec(r, n)
    c = build_constraint(spec, frozenset(stable_weight_classes(spec)))
    perms = sample_group(lta_group(n), M, seed=0)
    row_bits, nonzeros = known_perms_storage(c, perms)
    known = f"{row_bits} ({nonzeros} nonzero)"
    print(f"R({r},{n}): {memory_requirements(spec, M, STABLE):>8} "
          f"{known:>22} {memory_requirements(spec, M, UNKNOWN_PERMS):>14}")

print("\nscaling in M for R(3,7):")
spec = make_spec(3, 7)
c = build_constraint(spec, frozenset({1, 2, 3}))
print(f"{'M':>4} {'stable':>8} {'unknown-perms':>14}")
for m in (1, 2, 4, 8, 16):
    print(f"{m:>4} {memory_requirements(spec, m, STABLE):>8} "
          f"{memory_requirements(spec, m, UNKNOWN_PERMS):>14}")

"""Transform a constraint under affine permutations of the bit indices.

Two hand-sized examples on the length-8 code: a plain coordinate swap
(a variable-permutation member of the stable group) and a general
lower-triangular affine map with an offset. Both transformed
constraints stay orthogonal to the pre-transformation, and both turn
out to be row-space-equivalent to the original — the code is small
enough that even the affine example preserves the constraint.
"""

from rmae import build_constraint, is_stable, make_spec, transform_constraint
from rmae.autgroup import to_permutation
from rmae.gf2 import BitMatrix, mat_mul

c = build_constraint(make_spec(1, 3), frozenset({1}))
print("original V:")
print(c.V.to_text())

swap = to_permutation(
    BitMatrix.from_array([[0, 1, 0], [1, 0, 0], [0, 0, 1]]), [0, 0, 0]
)
affine = to_permutation(
    BitMatrix.from_array([[1, 0, 0], [0, 1, 0], [1, 0, 1]]), [1, 1, 1]
)

for name, p in (("coordinate swap", swap), ("affine with offset", affine)):
    vt = transform_constraint(c.V, p)
    print(f"{name}: index map {p.perm.tolist()}")
    print(vt.to_text())
    orthogonal = not mat_mul(c.W, vt.transpose()).to_array().any()
    print(f"  W . V_T^T == 0: {orthogonal}")
    print(f"  row space preserved (stable): {is_stable(c, p)}\n")

# At length 128 the picture changes: permutation-linear members of the
# block structure keep every variant's constraint, general affine
# members do not.
from rmae.autgroup import lta_group, sample_group, stable_group

c = build_constraint(make_spec(3, 7), frozenset({1, 2, 3}))
stable_members = sample_group(stable_group(7), 10, seed=0)
affine_members = sample_group(lta_group(7), 10, seed=0)
print("R(3,7), variant {1,2,3}:")
print(f"  stable-group members keeping the constraint: "
      f"{sum(is_stable(c, p) for p in stable_members)}/10")
print(f"  lower-triangular affine members keeping it:  "
      f"{sum(is_stable(c, p) for p in affine_members)}/10")

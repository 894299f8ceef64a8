"""Build code variants and look at their freezing constraints.

The smallest interesting case is the length-8, order-1 code: one
weight class is available for dynamic freezing, giving two variants.
The length-128, order-3 code has three classes and eight variants,
trading dynamic bits for storage one class at a time.
"""

from itertools import combinations

from rmae import build_constraint, make_spec, max_dynamic_count, stable_weight_classes

spec = make_spec(1, 3)
print(f"R(1,3): N={spec.N} K={spec.K} rate={spec.rate:g}")
print(f"stable weight classes: {sorted(stable_weight_classes(spec))}")

c = build_constraint(spec, frozenset({1}))
print(f"\nvariant {{1}} has {c.dynamic_count} dynamic frozen bit(s)")
print("constraint matrix V (one row per frozen bit):")
print(c.V.to_text())
print("pre-transformation W (information word -> input vector):")
print(c.W.to_text())

for k in c.dynamic_indices:
    print(f"input u[{k}] copies u[{c.rule[k]}]"
          f"  (static frozen rows pin their bit to zero)")

spec = make_spec(3, 7)
classes = sorted(stable_weight_classes(spec))
print(f"\nR(3,7): classes {classes}, "
      f"worst-case dynamic count D={max_dynamic_count(spec)}")
print(f"{'variant':>12}  dynamic bits")
for size in range(len(classes) + 1):
    for chosen in combinations(classes, size):
        c = build_constraint(spec, frozenset(chosen))
        name = "{" + ",".join(map(str, chosen)) + "}"
        print(f"{name:>12}  {c.dynamic_count}")

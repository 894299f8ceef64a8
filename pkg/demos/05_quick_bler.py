"""A small Monte Carlo comparison: list decoding vs the ensemble.

Runs the length-128, order-3 code at one channel point with modest
error targets — under a minute — and prints CSV. The ensemble
with eight permuted branches of list size 16 beats the plain list-16
decoder on the dynamic variant, and the variant beats the plain code
under the same ensemble.

Campaigns are reproducible: every trial derives its generator from
(seed, point, trial), so reruns and different worker counts give
identical numbers.
"""

import time

from rmae import build_constraint, make_spec
from rmae.autgroup import sample_blta_pl
from rmae.sim import DecoderSpec, points_to_csv, run_bler

spec = make_spec(3, 7)
variant = build_constraint(spec, frozenset({3}))
plain = build_constraint(spec, frozenset())
perms = sample_blta_pl(7, 8, seed=0)

runs = [
    ("variant{3}/scl-16", variant, DecoderSpec("scl", L=16)),
    ("variant{3}/ae-8-scl-16", variant, DecoderSpec("ae", L=16, perms=perms)),
    ("plain/ae-8-scl-16", plain, DecoderSpec("ae", L=16, perms=perms)),
]

print("label,ebn0_db,trials,errors,bler,ci_low,ci_high")
for label, c, dec in runs:
    started = time.time()
    points = run_bler(c, dec, [2.5], min_errors=50, max_trials=100_000, seed=1)
    csv = points_to_csv(points, label)
    print(csv.split("\n", 1)[1], end="")
    print(f"# {label}: {time.time() - started:.0f}s")

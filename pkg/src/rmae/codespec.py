"""Reed-Muller code structure and dynamic freezing constraints.

A Reed-Muller code of order r and length 2^n is described here through
the xor-transform view: input index k carries data iff the binary
representation of k has Hamming weight at least n-r. On top of that,
frozen inputs in the upper half of the index range may copy the value
of their complementary information index instead of being pinned to
zero; the resulting (V, W) matrix pair records those rules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np

from .exceptions import ConfigurationError, DimensionOverflowError
from .gf2 import MAX_STAGES, BitMatrix

# Entries of Constraint.rule: non-negative values name the information
# index whose decision a dynamic frozen position copies.
RULE_INFO = -1
RULE_ZERO = -2


@dataclass(frozen=True)
class CodeSpec:
    """Order, length and index partition of a Reed-Muller code."""

    r: int
    n: int
    N: int
    K: int
    info_set: tuple[int, ...]
    frozen_set: tuple[int, ...]

    @property
    def rate(self) -> float:
        return self.K / self.N

    def __repr__(self) -> str:
        return f"CodeSpec(r={self.r}, n={self.n}, N={self.N}, K={self.K})"


def make_spec(r: int, n: int) -> CodeSpec:
    """Build the index partition: info iff wt(binary(k)) >= n - r."""
    if not (isinstance(r, int) and isinstance(n, int)):
        raise ConfigurationError("order and log-length must be integers")
    if n < 0 or n > MAX_STAGES:
        raise DimensionOverflowError(
            f"log-length {n} outside supported range 0..{MAX_STAGES}"
        )
    if not 0 <= r <= n:
        raise ConfigurationError(f"order {r} outside 0..{n}")
    N = 1 << n
    info = tuple(k for k in range(N) if k.bit_count() >= n - r)
    frozen = tuple(k for k in range(N) if k.bit_count() < n - r)
    return CodeSpec(r=r, n=n, N=N, K=len(info), info_set=info, frozen_set=frozen)


@dataclass(frozen=True)
class Monomial:
    """Product of a subset of the n binary variables z_0..z_{n-1}.

    Row k of the xor transform evaluates the monomial whose variable
    set is the zero-bit positions of k.
    """

    variables: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(sorted(set(self.variables))))

    @property
    def degree(self) -> int:
        return len(self.variables)


def monomial_of_row(k: int, n: int) -> Monomial:
    if not 0 <= k < (1 << n):
        raise ConfigurationError(f"row index {k} outside 0..{(1 << n) - 1}")
    return Monomial(tuple(t for t in range(n) if not (k >> t) & 1))


def eval_monomial(m: Monomial, n: int) -> np.ndarray:
    """Evaluate over all of GF(2)^n; coordinate c uses the point with
    binary representation of N-1-c, reproducing the transform rows."""
    if m.variables and not (0 <= m.variables[0] and m.variables[-1] < n):
        raise ConfigurationError(f"monomial variables {m.variables} exceed n={n}")
    N = 1 << n
    points = (N - 1) - np.arange(N)
    out = np.ones(N, np.uint8)
    for t in m.variables:
        out &= ((points >> t) & 1).astype(np.uint8)
    return out


def stable_weight_classes(spec: CodeSpec) -> tuple[int, ...]:
    """Hamming-weight classes i for which upper-half frozen indices of
    weight i have an information-carrying complement: these are the
    classes that may be switched to copy rules without losing stability
    under the permutation group that fixes the top variable."""
    half = spec.N >> 1
    info = set(spec.info_set)
    classes = {
        k.bit_count()
        for k in spec.frozen_set
        if k >= half and (spec.N - 1) ^ k in info
    }
    return tuple(sorted(classes))


@dataclass(frozen=True)
class Constraint:
    """Freezing rules for one code variant, with the matrix view.

    rule[k] is RULE_INFO on information indices, RULE_ZERO on frozen
    indices pinned to zero, and the source information index j on
    dynamic frozen indices (u_k = u_j with j < N/2 <= k).

    V has one row per frozen index in ascending order: a single 1 at
    the frozen column, plus a 1 at the source column for dynamic rows.
    W has one row per information index i: a 1 at column i plus a 1 at
    every dynamic frozen column sourced from i; W @ V.T = 0.
    """

    spec: CodeSpec
    variant: frozenset[int]
    rule: np.ndarray = field(repr=False, compare=False)

    @property
    def dynamic_count(self) -> int:
        return int(np.count_nonzero(self.rule >= 0))

    @property
    def dynamic_indices(self) -> tuple[int, ...]:
        return tuple(int(k) for k in np.nonzero(self.rule >= 0)[0])

    @cached_property
    def V(self) -> BitMatrix:
        N = self.spec.N
        rows = np.zeros((N - self.spec.K, N), np.uint8)
        for t, k in enumerate(self.spec.frozen_set):
            rows[t, k] = 1
            if self.rule[k] >= 0:
                rows[t, self.rule[k]] = 1
        return BitMatrix.from_array(rows)

    @cached_property
    def W(self) -> BitMatrix:
        N = self.spec.N
        rows = np.zeros((self.spec.K, N), np.uint8)
        for t, i in enumerate(self.spec.info_set):
            rows[t, i] = 1
        sources = {i: t for t, i in enumerate(self.spec.info_set)}
        for k in np.nonzero(self.rule >= 0)[0]:
            rows[sources[int(self.rule[k])], k] = 1
        return BitMatrix.from_array(rows)

    def __repr__(self) -> str:
        return (
            f"Constraint({self.spec!r}, variant={sorted(self.variant)}, "
            f"dynamic={self.dynamic_count})"
        )


def build_constraint(spec: CodeSpec, variant) -> Constraint:
    """Constraint with copy rules on the chosen weight classes.

    variant is any iterable of Hamming weights from
    stable_weight_classes(spec); the empty variant pins every frozen
    bit to zero (the plain Reed-Muller code).
    """
    chosen = frozenset(int(i) for i in variant)
    valid = set(stable_weight_classes(spec))
    bad = chosen - valid
    if bad:
        raise ConfigurationError(
            f"weight classes {sorted(bad)} have no frozen/information "
            f"complement pair for {spec!r}; valid classes: {sorted(valid)}"
        )
    rule = np.full(spec.N, RULE_ZERO, np.int32)
    rule[list(spec.info_set)] = RULE_INFO
    half = spec.N >> 1
    info = set(spec.info_set)
    for k in spec.frozen_set:
        j = (spec.N - 1) ^ k
        if k >= half and k.bit_count() in chosen and j in info:
            rule[k] = j
    rule.flags.writeable = False
    return Constraint(spec=spec, variant=chosen, rule=rule)


def max_dynamic_count(spec: CodeSpec) -> int:
    """Upper bound on simultaneously-active copy rules; attained by the
    full variant."""
    half = spec.N >> 1
    frozen_hi = sum(1 for k in spec.frozen_set if k >= half)
    info_lo = sum(1 for j in spec.info_set if j < half)
    return min(frozen_hi, info_lo)


def count_stable_variants(spec: CodeSpec) -> int:
    if not 0 < spec.r < spec.n:
        raise ConfigurationError(
            f"variant counting needs 0 < r < n, got r={spec.r}, n={spec.n}"
        )
    return 1 << len(stable_weight_classes(spec))


def enumerate_stable_variants(spec: CodeSpec):
    """All valid variants as frozensets, empty set first, then by size."""
    classes = stable_weight_classes(spec)
    for size in range(len(classes) + 1):
        for combo in combinations(classes, size):
            yield frozenset(combo)


# ---- serialization ------------------------------------------------------

_RULE_WORDS = {RULE_INFO: "info", RULE_ZERO: "zero"}


def constraint_to_text(c: Constraint) -> str:
    lines = [
        f"n: {c.spec.n}",
        f"r: {c.spec.r}",
        "variant: " + ",".join(str(i) for i in sorted(c.variant)),
        "rules:",
    ]
    for k in range(c.spec.N):
        tag = c.rule[k]
        word = _RULE_WORDS.get(int(tag), f"copy {int(tag)}")
        lines.append(f"{k} {word}")
    return "\n".join(lines) + "\n"


def constraint_from_text(text: str) -> Constraint:
    """Parse and rebuild a constraint, verifying the stored rule table
    against the reconstruction so stale or hand-edited files fail loudly."""
    header: dict[str, str] = {}
    stored: dict[int, int] = {}
    in_rules = False
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if in_rules:
            parts = line.split()
            k = int(parts[0])
            if parts[1] == "info":
                stored[k] = RULE_INFO
            elif parts[1] == "zero":
                stored[k] = RULE_ZERO
            elif parts[1] == "copy" and len(parts) == 3:
                stored[k] = int(parts[2])
            else:
                raise ConfigurationError(f"unrecognized rule line: {raw!r}")
        elif line == "rules:":
            in_rules = True
        else:
            key, _, value = line.partition(":")
            header[key.strip()] = value.strip()
    try:
        n = int(header["n"])
        r = int(header["r"])
        variant = [int(v) for v in header["variant"].split(",") if v.strip()]
    except (KeyError, ValueError) as exc:
        raise ConfigurationError(f"bad constraint header: {exc}") from exc
    c = build_constraint(make_spec(r, n), variant)
    if len(stored) != c.spec.N or any(
        stored.get(k) != int(c.rule[k]) for k in range(c.spec.N)
    ):
        raise ConfigurationError(
            "stored rule table disagrees with the (n, r, variant) header"
        )
    return c

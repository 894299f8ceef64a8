"""Weight spectra, union bounds, and constraint-storage accounting.

Three routes to a weight spectrum: exhaustive encoding (exact, small
K), the classical closed form for the minimum-weight count of an
unconstrained code, and a noiseless list-decoder sweep that lower-
bounds the low-weight counts when exhaustion is out of reach. The
spectra feed a truncated union bound; the storage accounting prices
the per-branch constraint matrices an ensemble decoder would hold
under three sharing arrangements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _sclcore
from .autgroup import transform_constraint
from .codespec import CodeSpec, Constraint, max_dynamic_count
from .encdec import encode
from .exceptions import ConfigurationError, ResourceCapError
from .gf2 import rref

_BRUTE_MAX_K = 24
_BRUTE_BATCH = 1 << 16
_ENUM_BYTES_CAP = 1 << 32
_MAX_TRACKED_WEIGHT = 24

# Storage scenarios: one shared constraint (stable ensemble), one
# row-reduced matrix per known permutation, or worst-case full
# matrices when the permutations are not fixed in advance.
STABLE = "stable"
KNOWN_PERMS = "known-perms"
UNKNOWN_PERMS = "unknown-perms"


@dataclass(frozen=True)
class WeightSpectrum:
    """Codeword counts by Hamming weight.

    exact means every listed weight's count is the true one; an
    estimate from the list sweep is a lower bound per weight and is
    marked exact only when the list provably held the whole codebook.
    """

    counts: dict[int, int]
    exact: bool
    method: str

    def count(self, w: int) -> int:
        return self.counts.get(w, 0)

    def min_weight(self) -> int:
        """Smallest nonzero codeword weight on record."""
        nonzero = [w for w, c in self.counts.items() if w > 0 and c > 0]
        if not nonzero:
            raise ConfigurationError("spectrum records no nonzero codewords")
        return min(nonzero)


def brute_weight_enum(c: Constraint) -> WeightSpectrum:
    """Exact spectrum by encoding every data word."""
    spec = c.spec
    if spec.K > _BRUTE_MAX_K:
        raise ResourceCapError(
            f"K={spec.K} exceeds the exhaustive-enumeration limit {_BRUTE_MAX_K}"
        )
    total = np.zeros(spec.N + 1, np.int64)
    shifts = np.arange(spec.K, dtype=np.uint32)
    words = 1 << spec.K
    for base in range(0, words, _BRUTE_BATCH):
        count = min(_BRUTE_BATCH, words - base)
        idx = base + np.arange(count, dtype=np.uint32)
        v = ((idx[:, None] >> shifts[None, :]) & 1).astype(np.uint8)
        x = encode(v, c)
        total += np.bincount(x.sum(axis=-1), minlength=spec.N + 1)
    counts = {int(w): int(total[w]) for w in np.flatnonzero(total)}
    return WeightSpectrum(counts=counts, exact=True, method="brute")


def rm_minweight_count(r: int, n: int) -> int:
    """Number of minimum-weight (2^{n-r}) codewords of the order-r,
    length-2^n code: 2^r * prod_i (2^{n-i}-1)/(2^{n-r-i}-1)."""
    if not 0 < r < n:
        raise ConfigurationError(
            f"minimum-weight count needs 0 < r < n, got r={r}, n={n}"
        )
    acc = Fraction(1 << r)
    for i in range(n - r):
        acc *= Fraction((1 << (n - i)) - 1, (1 << (n - r - i)) - 1)
    if acc.denominator != 1:
        raise AssertionError("minimum-weight product did not reduce to an integer")
    return int(acc)


def formula_spectrum(r: int, n: int) -> WeightSpectrum:
    """Spectrum floor from the closed form: the zero word plus the
    minimum-weight tier of the unconstrained code."""
    wmin = 1 << (n - r)
    return WeightSpectrum(
        counts={0: 1, wmin: rm_minweight_count(r, n)}, exact=False, method="formula"
    )


def low_weight_enum_scl(c: Constraint, L: int = 1 << 14, w_max: int = 20) -> WeightSpectrum:
    """Low-weight counts from a noiseless all-zero list decode.

    With every LLR pinned to the same positive value, a path's metric
    is proportional to the weight of its codeword prefix, so the L
    survivors are the lightest codewords the list could carry. Counts
    are lower bounds, monotone non-decreasing in L; the result is
    exact only when L covers the whole codebook (2^K <= L).
    """
    spec = c.spec
    if L < 1:
        raise ConfigurationError(f"list size {L} must be at least 1")
    if not 0 < w_max <= _MAX_TRACKED_WEIGHT:
        raise ConfigurationError(
            f"weight cap {w_max} outside 1..{_MAX_TRACKED_WEIGHT}"
        )
    footprint = L * (9 * max(spec.N - 1, 1) + 4 * spec.N) + 32 * L
    if footprint > _ENUM_BYTES_CAP:
        raise ResourceCapError(
            f"list sweep at L={L}, N={spec.N} needs about {footprint >> 20} MiB, "
            f"over the {_ENUM_BYTES_CAP >> 20} MiB cap"
        )
    chan = np.full(spec.N, 1.0)
    _uh, _pm, cw, nact = _sclcore.scl_run(chan, c.rule, int(L), spec.n)
    weights = cw[:nact].sum(axis=1)
    tallies = np.bincount(weights, minlength=spec.N + 1)
    counts = {
        int(w): int(tallies[w]) for w in np.flatnonzero(tallies) if w <= w_max
    }
    if tallies[0]:
        counts[0] = int(tallies[0])
    return WeightSpectrum(counts=counts, exact=(1 << spec.K) <= L, method="scl-estimate")


def qfunc(x: float) -> float:
    """Gaussian tail probability via the complementary error function."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def truncated_union_bound(
    ws: WeightSpectrum, rate: float, ebn0_db: float, w_max: int = 20
) -> float:
    """Sum of A_w * Q(sqrt(2 * rate * w * Eb/N0)) over 0 < w <= w_max."""
    if not ws.counts:
        raise ConfigurationError("spectrum has no entries")
    esno = 10.0 ** (ebn0_db / 10.0)
    return sum(
        count * qfunc(math.sqrt(2.0 * rate * w * esno))
        for w, count in ws.counts.items()
        if 0 < w <= w_max
    )


def known_perms_storage(c: Constraint, perms) -> tuple[int, int]:
    """Storage of the row-reduced transformed constraint matrices, as
    (total bits at kept-rows x N, total nonzero entries).

    Two counting conventions are reported because sparse storage of
    the reduced matrices admits several reasonable prices; callers
    pick the column that matches theirs.
    """
    perms = list(perms)
    if not perms:
        raise ConfigurationError("known-permutation storage needs permutations")
    N = c.spec.N
    row_bits = 0
    nonzeros = 0
    for p in perms:
        reduced, _pivots = rref(transform_constraint(c.V, p))
        row_bits += reduced.rows * N
        nonzeros += int(reduced.to_array().sum())
    return row_bits, nonzeros


def memory_requirements(
    spec: CodeSpec, M: int, scenario: str, constraint: Constraint = None, perms=None
) -> int:
    """Constraint-storage bits for an M-branch ensemble.

    stable: one shared rule table, priced at its worst-case dynamic
    count D (each copy rule is one source index). known-perms: one
    row-reduced transformed matrix per branch (needs the constraint
    and the permutations; returns the kept-rows x N convention, see
    known_perms_storage for both numbers). unknown-perms: M full
    (N-K) x N matrices, nothing reducible in advance.
    """
    if M < 0:
        raise ConfigurationError(f"ensemble size {M} is negative")
    if scenario == STABLE:
        return max_dynamic_count(spec)
    if scenario == UNKNOWN_PERMS:
        return M * spec.N * (spec.N - spec.K)
    if scenario == KNOWN_PERMS:
        if constraint is None or perms is None:
            raise ConfigurationError(
                "known-perms accounting needs a constraint and its permutations"
            )
        if constraint.spec != spec:
            raise ConfigurationError("constraint was built for a different code")
        perms = list(perms)
        if len(perms) != M:
            raise ConfigurationError(
                f"{len(perms)} permutations supplied for ensemble size {M}"
            )
        row_bits, _nonzeros = known_perms_storage(constraint, perms)
        return row_bits
    raise ConfigurationError(f"unknown storage scenario {scenario!r}")


def spectrum_to_text(ws: WeightSpectrum) -> str:
    """weight,count lines under a method/exactness header."""
    lines = [f"# method={ws.method} exact={'yes' if ws.exact else 'no'}"]
    lines += [f"{w},{ws.counts[w]}" for w in sorted(ws.counts)]
    return "\n".join(lines) + "\n"


def bound_points(
    ws: WeightSpectrum, rate: float, ebn0_list, w_max: int = 20
) -> list[tuple[float, float]]:
    return [
        (float(e), truncated_union_bound(ws, rate, float(e), w_max))
        for e in ebn0_list
    ]


def bound_points_to_text(points) -> str:
    return "\n".join(f"{e:g},{b:.6e}" for e, b in points) + "\n"

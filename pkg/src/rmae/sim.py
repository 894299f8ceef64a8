"""AWGN/BPSK Monte Carlo block-error-rate harness.

Every trial is seeded on its own index, so a campaign's outcome is a
pure function of (seed, configuration): trial schedules may be split
across processes in any way without changing a single decision. The
stopping rule is likewise defined on the deterministic batch sequence
— a point ends after the first batch at which the cumulative error
count reaches min_errors (or the trial cap), never on wall-clock or
scheduling accidents.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _sclcore
from .codespec import build_constraint, make_spec, Constraint
from .encdec import AEDecoder, LLR_CLIP, SoftInput, polar_transform
from .exceptions import ConfigurationError

_WILSON_Z = 1.959963984540054  # two-sided 95%
_DEFAULT_BATCH = 256


@dataclass(frozen=True)
class ChannelPoint:
    """Binary-input AWGN operating point; BPSK maps bit 0 to +1."""

    ebn0_db: float
    rate: float

    def __post_init__(self):
        if not 0.0 < self.rate <= 1.0:
            raise ConfigurationError(f"rate {self.rate} outside (0, 1]")

    @property
    def sigma2(self) -> float:
        return 1.0 / (2.0 * self.rate * 10.0 ** (self.ebn0_db / 10.0))


def transmit(x, cp: ChannelPoint, rng: np.random.Generator) -> SoftInput:
    """Send codeword x over the channel; LLR = 2y/sigma^2, clipped."""
    x = np.asarray(x, np.uint8)
    sigma2 = cp.sigma2
    y = (1.0 - 2.0 * x) + rng.normal(0.0, np.sqrt(sigma2), x.size)
    llrs = np.clip(2.0 * y / sigma2, -LLR_CLIP, LLR_CLIP)
    return SoftInput(llrs=llrs, y=y)


def wilson_interval(errors: int, trials: int) -> tuple[float, float]:
    """95% score interval for a binomial proportion."""
    if trials < 1:
        raise ConfigurationError("interval needs at least one trial")
    if not 0 <= errors <= trials:
        raise ConfigurationError(f"{errors} errors in {trials} trials")
    z2 = _WILSON_Z * _WILSON_Z
    phat = errors / trials
    denom = 1.0 + z2 / trials
    centre = phat + z2 / (2.0 * trials)
    spread = _WILSON_Z * np.sqrt(
        phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials)
    )
    # At the extremes the exact bound is 0 or 1; don't leak rounding dust.
    lo = 0.0 if errors == 0 else max(0.0, (centre - spread) / denom)
    hi = 1.0 if errors == trials else min(1.0, (centre + spread) / denom)
    return (lo, hi)


@dataclass(frozen=True)
class BLERPoint:
    ebn0_db: float
    trials: int
    errors: int

    @property
    def bler(self) -> float:
        return self.errors / self.trials

    @property
    def ci95(self) -> tuple[float, float]:
        return wilson_interval(self.errors, self.trials)


@dataclass(frozen=True)
class DecoderSpec:
    """Which decoder a campaign runs: plain list ("scl", L=1 being
    single-path), or the permutation ensemble ("ae") with its branch
    permutations."""

    kind: str
    L: int = 16
    perms: tuple = ()

    def __post_init__(self):
        if self.kind not in ("scl", "ae"):
            raise ConfigurationError(f"unknown decoder kind {self.kind!r}")
        if self.L < 1:
            raise ConfigurationError(f"list size {self.L} must be at least 1")
        object.__setattr__(self, "perms", tuple(self.perms))
        if self.kind == "ae" and not self.perms:
            raise ConfigurationError("ensemble decoder needs permutations")

    def label(self) -> str:
        if self.kind == "ae":
            return f"ae-{len(self.perms)}-scl-{self.L}"
        return f"scl-{self.L}"


@lru_cache(maxsize=None)
def _codec(r: int, n: int, variant: tuple) -> tuple:
    """Per-process constraint plus the index arrays hot loops need."""
    c = build_constraint(make_spec(r, n), frozenset(variant))
    info_idx = np.array(c.spec.info_set, np.int64)
    targets = c.dynamic_indices
    sources = np.array([c.rule[k] for k in targets], np.int64)
    targets = np.array(targets, np.int64)
    return c, info_idx, targets, sources


def _run_batch(
    r: int,
    n: int,
    variant: tuple,
    kind: str,
    L: int,
    perm_rows,
    sigma2: float,
    seed: int,
    point_idx: int,
    start: int,
    stop: int,
) -> tuple[int, int]:
    """Trials [start, stop) of one point; returns (trials, errors)."""
    c, info_idx, dyn_t, dyn_s = _codec(r, n, variant)
    N = c.spec.N
    K = c.spec.K
    rule = c.rule
    sigma = np.sqrt(sigma2)
    scale = 2.0 / sigma2
    errors = 0
    for ti in range(start, stop):
        rng = np.random.default_rng(np.random.SeedSequence((seed, point_idx, ti)))
        v = rng.integers(0, 2, K, dtype=np.uint8)
        u = np.zeros(N, np.uint8)
        u[info_idx] = v
        if dyn_t.size:
            u[dyn_t] = u[dyn_s]
        x = polar_transform(u)
        y = (1.0 - 2.0 * x) + rng.normal(0.0, sigma, N)
        llrs = np.clip(scale * y, -LLR_CLIP, LLR_CLIP)
        if kind == "ae":
            cw, _met, _pm, _br = _sclcore.ae_run(llrs, y, rule, L, n, perm_rows)
            decoded = polar_transform(cw)[info_idx]
        else:
            uh, _pm, _cw, _nact = _sclcore.scl_run(llrs, rule, L, n)
            decoded = uh[0][info_idx]
        if not np.array_equal(decoded, v):
            errors += 1
    return stop - start, errors


def run_bler(
    c: Constraint,
    decoder: DecoderSpec,
    ebn0_list,
    min_errors: int = 100,
    max_trials: int = 1_000_000,
    seed: int = 0,
    workers: int = 1,
    batch: int = _DEFAULT_BATCH,
) -> list[BLERPoint]:
    """Estimate BLER at each Eb/N0 until min_errors or max_trials.

    A block error is a decoded information word differing from the
    transmitted one. Per-trial generators are derived from
    (seed, point index, trial index), and stopping is evaluated on
    whole batches in index order, so the result is identical for any
    worker count.
    """
    if min_errors < 1:
        raise ConfigurationError(f"min_errors {min_errors} must be at least 1")
    if max_trials < 1:
        raise ConfigurationError(f"max_trials {max_trials} must be at least 1")
    if batch < 1:
        raise ConfigurationError(f"batch size {batch} must be at least 1")
    if workers < 1:
        raise ConfigurationError(f"worker count {workers} must be at least 1")
    perm_rows = None
    if decoder.kind == "ae":
        # Configuration-time stability check, shared with the direct
        # decoding surface.
        perm_rows = AEDecoder(c, decoder.perms, decoder.L)._perm_rows
    spec = c.spec
    variant = tuple(sorted(c.variant))
    points = []
    for point_idx, ebn0 in enumerate(ebn0_list):
        cp = ChannelPoint(ebn0_db=float(ebn0), rate=spec.K / spec.N)
        args = (spec.r, spec.n, variant, decoder.kind, decoder.L, perm_rows,
                cp.sigma2, seed, point_idx)
        bounds = [
            (b, min(b + batch, max_trials)) for b in range(0, max_trials, batch)
        ]
        trials = 0
        errors = 0
        if workers == 1:
            for start, stop in bounds:
                done, bad = _run_batch(*args, start, stop)
                trials += done
                errors += bad
                if errors >= min_errors:
                    break
        else:
            with concurrent.futures.ProcessPoolExecutor(workers) as pool:
                pending = {}
                cursor = 0
                submitted = 0
                stopped = False
                while cursor < len(bounds) and not stopped:
                    while submitted < len(bounds) and submitted - cursor < 2 * workers:
                        start, stop = bounds[submitted]
                        pending[submitted] = pool.submit(_run_batch, *args, start, stop)
                        submitted += 1
                    done, bad = pending.pop(cursor).result()
                    trials += done
                    errors += bad
                    cursor += 1
                    if errors >= min_errors:
                        stopped = True
                for fut in pending.values():
                    fut.cancel()
        points.append(BLERPoint(ebn0_db=cp.ebn0_db, trials=trials, errors=errors))
    return points


def points_to_csv(points, label: str = "") -> str:
    """One record per point; label column tags the decoder/config."""
    lines = ["label,ebn0_db,trials,errors,bler,ci_low,ci_high"]
    for p in points:
        lo, hi = p.ci95
        lines.append(
            f"{label},{p.ebn0_db:g},{p.trials},{p.errors},"
            f"{p.bler:.6e},{lo:.6e},{hi:.6e}"
        )
    return "\n".join(lines) + "\n"

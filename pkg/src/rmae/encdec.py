"""Encoding and decoding for the constrained codes.

Encoding places the data word on the information indices, fills the
frozen positions by their rules, and applies the xor transform.
Decoding is LLR-domain successive cancellation with min-sum updates
(ties to bit 0), in single-path, list, and permutation-ensemble
variants. Candidate ranking inside a list is by path metric; final
selection between candidates is by the squared Euclidean distance
between the codeword's BPSK image and the retained observation.

The list decoder proper lives in _sclcore so it can be jitted; this
module owns the reference implementations and the result types.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _sclcore
from .autgroup import is_stable
from .codespec import RULE_INFO, RULE_ZERO, Constraint
from .exceptions import ConfigurationError

if (_sclcore.RULE_INFO, _sclcore.RULE_ZERO) != (RULE_INFO, RULE_ZERO):
    raise ImportError("decoder core rule tags diverged from codespec")

# Channel LLR magnitudes are clipped here; large enough to be beyond
# any plausible AWGN observation, small enough that path metrics of
# full-length blocks stay comfortably inside float64.
LLR_CLIP = 1.0e4


@dataclass(frozen=True)
class SoftInput:
    """Channel LLRs (positive favours bit 0) plus the raw observation
    kept for least-squares selection.

    When no observation is supplied the LLR vector stands in for it;
    the two differ by the positive factor 2/sigma^2, which preserves
    every distance ordering.
    """

    llrs: np.ndarray
    y: np.ndarray = None

    def __post_init__(self):
        llrs = np.ascontiguousarray(self.llrs, np.float64)
        if llrs.ndim != 1:
            raise ConfigurationError("soft input must be a flat vector")
        y = llrs if self.y is None else np.ascontiguousarray(self.y, np.float64)
        if y.shape != llrs.shape:
            raise ConfigurationError(
                f"observation length {y.shape} does not match LLRs {llrs.shape}"
            )
        object.__setattr__(self, "llrs", llrs)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class DecodeResult:
    """One decoded candidate.

    metric is the squared Euclidean distance between the codeword's
    BPSK image and the observation it was decoded from; path_metric is
    the decoder-internal min-sum penalty total.
    """

    codeword: np.ndarray
    info_bits: np.ndarray
    metric: float
    path_metric: float


def polar_transform(bits) -> np.ndarray:
    """xor transform along the last axis (its own inverse)."""
    x = np.array(bits, dtype=np.uint8)
    N = x.shape[-1]
    if N == 0 or (N & (N - 1)) != 0:
        raise ConfigurationError(f"transform length {N} is not a power of two")
    h = 1
    while h < N:
        pairs = x.reshape(x.shape[:-1] + (N // (2 * h), 2, h))
        pairs[..., 0, :] ^= pairs[..., 1, :]
        h <<= 1
    return x


def encode(v, c: Constraint) -> np.ndarray:
    """Codeword for data word v under constraint c.

    Accepts a single length-K word or any batch of shape (..., K);
    the rule table and the matrix route (v @ W @ G) agree by
    construction of W.
    """
    v = np.asarray(v, np.uint8)
    spec = c.spec
    if v.shape[-1] != spec.K:
        raise ConfigurationError(
            f"data word length {v.shape[-1]} does not match K={spec.K}"
        )
    u = np.zeros(v.shape[:-1] + (spec.N,), np.uint8)
    u[..., list(spec.info_set)] = v & 1
    rule = c.rule
    for k in spec.frozen_set:
        if rule[k] >= 0:
            u[..., k] = u[..., rule[k]]
    return polar_transform(u)


def info_from_codeword(x, c: Constraint) -> np.ndarray:
    """Data word carried by codeword x (transform is involutory)."""
    return polar_transform(x)[..., list(c.spec.info_set)]


def squared_distance(codeword, y) -> float:
    """Squared Euclidean distance between BPSK(codeword) and y."""
    d = np.asarray(y, np.float64) - (1.0 - 2.0 * np.asarray(codeword, np.float64))
    return float(d @ d)


def sc_decode(s: SoftInput, c: Constraint) -> DecodeResult:
    """Single-path successive cancellation, as a plain recursion.

    Decision policy at each input index: zero-frozen forces 0, a copy
    rule repeats the already-decided source bit, and information bits
    follow the LLR sign with ties to 0. Matches scl_decode with L=1
    decision for decision, penalty for penalty.
    """
    spec = c.spec
    llrs = s.llrs
    if llrs.size != spec.N:
        raise ConfigurationError(f"expected {spec.N} LLRs, got {llrs.size}")
    rule = c.rule
    decided = np.zeros(spec.N, np.uint8)
    penalty = 0.0

    def descend(lam: np.ndarray, base: int) -> np.ndarray:
        nonlocal penalty
        if lam.size == 1:
            rl = rule[base]
            if rl == RULE_ZERO:
                bit = np.uint8(0)
            elif rl == RULE_INFO:
                bit = np.uint8(1) if lam[0] < 0.0 else np.uint8(0)
            else:
                bit = decided[rl]
            if bit == 0:
                if lam[0] < 0.0:
                    penalty -= lam[0]
            elif lam[0] >= 0.0:
                penalty += lam[0]
            decided[base] = bit
            return np.array([bit], np.uint8)
        half = lam.size >> 1
        a, b = lam[:half], lam[half:]
        mag = np.minimum(np.abs(a), np.abs(b))
        flip = (a < 0.0) != (b < 0.0)
        left = descend(np.where(flip, -mag, mag), base)
        right = descend(np.where(left == 1, b - a, b + a), base + half)
        return np.concatenate([left ^ right, right])

    codeword = descend(llrs, 0)
    info = decided[list(spec.info_set)]
    return DecodeResult(codeword, info, squared_distance(codeword, s.y), penalty)


def scl_decode(s: SoftInput, c: Constraint, L: int) -> list[DecodeResult]:
    """List decode; up to L survivors sorted by ascending path metric.

    Metric ties keep the decoder's internal path order, which is
    deterministic, so repeated calls agree bit for bit.
    """
    spec = c.spec
    if L < 1:
        raise ConfigurationError(f"list size {L} must be at least 1")
    if s.llrs.size != spec.N:
        raise ConfigurationError(f"expected {spec.N} LLRs, got {s.llrs.size}")
    uh, pm, cw, nact = _sclcore.scl_run(s.llrs, c.rule, int(L), spec.n)
    info_idx = list(spec.info_set)
    return [
        DecodeResult(cw[q], uh[q][info_idx], squared_distance(cw[q], s.y), float(pm[q]))
        for q in range(nact)
    ]


def select_ml(candidates, y) -> DecodeResult:
    """Candidate whose BPSK image is nearest to y (first wins ties)."""
    if not candidates:
        raise ConfigurationError("no candidates to select from")
    y = np.asarray(y, np.float64)
    best = None
    best_d = np.inf
    for cand in candidates:
        d = squared_distance(cand.codeword, y)
        if d < best_d:
            best = cand
            best_d = d
    return best


class AEDecoder:
    """Permutation-ensemble front end over the list decoder.

    Each branch scatters the channel LLRs through its permutation,
    list-decodes under the shared constraint, and pulls its best path
    back through the inverse permutation; the branch winners then
    compete on the least-squares metric against the original
    observation, first branch winning ties. Sharing one constraint is
    sound only for permutations the constraint is stable under, so
    that is checked once here.

    Alternatively each branch may carry its own rule table
    (branch_constraints), the arrangement that prices one stored
    matrix per branch; no stability check applies because nothing is
    shared.
    """

    def __init__(self, constraint: Constraint, perms, L: int, branch_constraints=None):
        perms = list(perms)
        if not perms:
            raise ConfigurationError("ensemble needs at least one permutation")
        if L < 1:
            raise ConfigurationError(f"list size {L} must be at least 1")
        N = constraint.spec.N
        for p in perms:
            if p.perm.size != N:
                raise ConfigurationError(
                    f"permutation on {p.perm.size} coordinates, code length {N}"
                )
        if branch_constraints is None:
            unstable = [m for m, p in enumerate(perms) if not is_stable(constraint, p)]
            if unstable:
                raise ConfigurationError(
                    "constraint is not stable under ensemble branch(es) "
                    f"{unstable}; supply branch_constraints instead"
                )
            self.branch_constraints = None
        else:
            branch_constraints = list(branch_constraints)
            if len(branch_constraints) != len(perms):
                raise ConfigurationError(
                    f"{len(branch_constraints)} branch constraints "
                    f"for {len(perms)} permutations"
                )
            for bc in branch_constraints:
                if bc.spec.N != N:
                    raise ConfigurationError("branch constraint length mismatch")
            self.branch_constraints = branch_constraints
        self.constraint = constraint
        self.perms = perms
        self.L = int(L)
        self._perm_rows = np.ascontiguousarray(
            np.stack([p.perm for p in perms]), np.int64
        )

    def decode_branches(self, s: SoftInput) -> list[DecodeResult]:
        """Winner of every branch, in branch order."""
        out = []
        for m, p in enumerate(self.perms):
            c = self.constraint if self.branch_constraints is None else (
                self.branch_constraints[m]
            )
            permuted = SoftInput(p.apply(s.llrs))
            best = scl_decode(permuted, c, self.L)[0]
            codeword = p.apply_inverse(best.codeword)
            out.append(
                DecodeResult(
                    codeword,
                    info_from_codeword(codeword, self.constraint),
                    squared_distance(codeword, s.y),
                    best.path_metric,
                )
            )
        return out

    def decode(self, s: SoftInput) -> DecodeResult:
        if s.llrs.size != self.constraint.spec.N:
            raise ConfigurationError(
                f"expected {self.constraint.spec.N} LLRs, got {s.llrs.size}"
            )
        if self.branch_constraints is not None:
            return select_ml(self.decode_branches(s), s.y)
        spec = self.constraint.spec
        cw, _metric, pm, _branch = _sclcore.ae_run(
            s.llrs, s.y, self.constraint.rule, self.L, spec.n, self._perm_rows
        )
        # The core's running metric picks the branch; the reported one
        # is recomputed so all DecodeResult metrics share one summation
        # order.
        return DecodeResult(
            cw,
            info_from_codeword(cw, self.constraint),
            squared_distance(cw, s.y),
            float(pm),
        )


def ae_decode(s: SoftInput, perms, c: Constraint, L: int) -> DecodeResult:
    """One-shot ensemble decode; see AEDecoder for the composition.

    Builds a decoder per call, repeating the stability check; loops
    that decode many blocks should hold an AEDecoder instead.
    """
    return AEDecoder(c, perms, L).decode(s)

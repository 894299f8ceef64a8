"""Affine permutations of code coordinates and constraint stability.

An invertible matrix A over GF(2)^n plus an offset b act on coordinate
indices through their binary representations: index i maps to
bi2int(A*bits(i) + b). Subgroups are described by a block-lower-
triangular shape for A (diagonal block sizes summing to n), optionally
intersected with the permutation-matrix/zero-offset subgroup.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial, prod

import numpy as np

from .codespec import Constraint
from .exceptions import ConfigurationError, ResourceCapError
from .gf2 import BitMatrix, invert, kron_power, mat_mul, rank, rref

# Enumeration / distinct-sampling guards.
_ENUM_CAP = 1 << 20
_SAMPLE_PATIENCE = 2000


def _bits_of(i: int, n: int) -> np.ndarray:
    return ((i >> np.arange(n)) & 1).astype(np.uint8)


@dataclass(frozen=True)
class AffinePerm:
    """z -> A*z + b on GF(2)^n together with the induced index map."""

    A: BitMatrix
    b: np.ndarray = field(compare=False)
    perm: np.ndarray = field(compare=False, repr=False)

    def __post_init__(self):
        self.b.flags.writeable = False
        self.perm.flags.writeable = False

    @property
    def n(self) -> int:
        return self.A.rows

    @property
    def N(self) -> int:
        return 1 << self.n

    def key(self) -> bytes:
        """Canonical byte encoding of (A, b), used for dedup and display."""
        return self.A.words.tobytes() + self.b.tobytes()

    def is_identity(self) -> bool:
        return bool(np.all(self.perm == np.arange(self.N)))

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Move coordinate i of v to coordinate perm[i]."""
        out = np.empty_like(v)
        out[self.perm] = v
        return out

    def apply_inverse(self, v: np.ndarray) -> np.ndarray:
        return v[self.perm]

    def inverse(self) -> "AffinePerm":
        Ainv = invert(self.A)
        if Ainv is None:  # unreachable for a validated AffinePerm
            raise ConfigurationError("affine map is not invertible")
        binv = (mat_mul(Ainv, BitMatrix.from_array(self.b[:, None])).to_array()[:, 0])
        inv_perm = np.empty_like(self.perm)
        inv_perm[self.perm] = np.arange(self.N)
        return AffinePerm(A=Ainv, b=binv, perm=inv_perm)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AffinePerm):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        head = ",".join(str(p) for p in self.perm[:8])
        tail = ",..." if self.N > 8 else ""
        return f"AffinePerm(n={self.n}, perm=({head}{tail}))"


def to_permutation(A: BitMatrix, b) -> AffinePerm:
    """Validate (A, b) and tabulate the induced index permutation."""
    if A.rows != A.cols:
        raise ConfigurationError("affine matrix must be square")
    n = A.rows
    bvec = np.asarray(b, np.uint8).reshape(-1)
    if bvec.size != n or not np.isin(bvec, (0, 1)).all():
        raise ConfigurationError("offset must be a length-n binary vector")
    if invert(A) is None:
        raise ConfigurationError("affine matrix is singular")
    N = 1 << n
    cols = ((np.arange(N)[None, :] >> np.arange(n)[:, None]) & 1).astype(np.uint8)
    y = (A.to_array() @ cols) & 1
    y ^= bvec[:, None]
    perm = (y.astype(np.int64) << np.arange(n)[:, None]).sum(axis=0)
    return AffinePerm(A=A, b=bvec.copy(), perm=perm)


def identity_perm(n: int) -> AffinePerm:
    return to_permutation(BitMatrix.identity(n), np.zeros(n, np.uint8))


# ---- group descriptors --------------------------------------------------


@dataclass(frozen=True)
class GroupSpec:
    """Block-lower-triangular affine group, optionally restricted to
    permutation matrices with zero offset."""

    blocks: tuple[int, ...]
    pl: bool

    def __post_init__(self):
        if not self.blocks or any(s < 1 for s in self.blocks):
            raise ConfigurationError(f"invalid block sizes {self.blocks}")

    @property
    def n(self) -> int:
        return sum(self.blocks)

    def describe(self) -> str:
        shape = ",".join(str(s) for s in self.blocks)
        return f"blta({shape})" + ("&pl" if self.pl else "")


def stable_group(n: int) -> GroupSpec:
    """Permutation matrices fixing the top variable: the group every
    constraint built here is provably stable under."""
    if n < 2:
        raise ConfigurationError("stable group needs n >= 2")
    return GroupSpec(blocks=(n - 1, 1), pl=True)


def lta_group(n: int) -> GroupSpec:
    return GroupSpec(blocks=(1,) * n, pl=False)


def ga_group(n: int) -> GroupSpec:
    return GroupSpec(blocks=(n,), pl=False)


def pl_group(n: int) -> GroupSpec:
    return GroupSpec(blocks=(n,), pl=True)


def identity_group(n: int) -> GroupSpec:
    return GroupSpec(blocks=(1,) * n, pl=True)


_NAMED_GROUPS = {
    "stable": stable_group,
    "lta": lta_group,
    "ga": ga_group,
    "pl": pl_group,
    "identity": identity_group,
}


def group_from_name(name: str, n: int) -> GroupSpec:
    """Parse 'stable' | 'lta' | 'ga' | 'pl' | 'identity' | 'blta:2,1'
    | 'blta-pl:2,1'."""
    key = name.strip().lower()
    if key in _NAMED_GROUPS:
        return _NAMED_GROUPS[key](n)
    head, _, shape = key.partition(":")
    if head in ("blta", "blta-pl") and shape:
        try:
            blocks = tuple(int(s) for s in shape.split(","))
        except ValueError as exc:
            raise ConfigurationError(f"bad block sizes in {name!r}") from exc
        gs = GroupSpec(blocks=blocks, pl=head == "blta-pl")
        if gs.n != n:
            raise ConfigurationError(
                f"block sizes {blocks} sum to {gs.n}, expected {n}"
            )
        return gs
    raise ConfigurationError(f"unknown group {name!r}")


def _gl_order(s: int) -> int:
    return prod((1 << s) - (1 << t) for t in range(s))


def group_size(gs: GroupSpec) -> int:
    if gs.pl:
        return prod(factorial(s) for s in gs.blocks)
    n = gs.n
    sub_cells = (n * n - sum(s * s for s in gs.blocks)) // 2
    return (1 << n) * (1 << sub_cells) * prod(_gl_order(s) for s in gs.blocks)


# ---- sampling and enumeration -------------------------------------------


def _lehmer_permutation(index: int, s: int) -> list[int]:
    """Decode a Lehmer index in [0, s!) to a permutation of range(s)."""
    digits = []
    for radix in range(1, s + 1):
        digits.append(index % radix)
        index //= radix
    digits.reverse()
    pool = list(range(s))
    return [pool.pop(d) for d in digits]


def _block_slices(blocks: tuple[int, ...]):
    start = 0
    for s in blocks:
        yield start, s
        start += s


def _assemble_pl(gs: GroupSpec, block_perms) -> BitMatrix:
    n = gs.n
    A = np.zeros((n, n), np.uint8)
    for (start, s), p in zip(_block_slices(gs.blocks), block_perms):
        for row, col in enumerate(p):
            A[start + row, start + col] = 1
    return BitMatrix.from_array(A)


def _random_invertible(rng: np.random.Generator, s: int) -> np.ndarray:
    while True:
        cand = rng.integers(0, 2, size=(s, s), dtype=np.uint8)
        if rank(BitMatrix.from_array(cand)) == s:
            return cand


def _sample_one(gs: GroupSpec, rng: np.random.Generator) -> AffinePerm:
    n = gs.n
    if gs.pl:
        perms = [_lehmer_permutation(int(rng.integers(factorial(s))), s)
                 for s in gs.blocks]
        return to_permutation(_assemble_pl(gs, perms), np.zeros(n, np.uint8))
    A = np.zeros((n, n), np.uint8)
    for start, s in _block_slices(gs.blocks):
        A[start:start + s, start:start + s] = _random_invertible(rng, s)
        A[start + s:, start:start + s] = rng.integers(
            0, 2, size=(n - start - s, s), dtype=np.uint8
        )
    b = rng.integers(0, 2, size=n, dtype=np.uint8)
    return to_permutation(BitMatrix.from_array(A), b)


def sample_group(gs: GroupSpec, M: int, seed) -> list[AffinePerm]:
    """M distinct members, deterministic in the seed.

    For permutation-matrix groups the identity is excluded unless M
    equals the full group size, so small ensembles never waste a branch
    on the trivial permutation.
    """
    size = group_size(gs)
    if M < 0 or M > size:
        raise ConfigurationError(
            f"cannot draw {M} distinct members from {gs.describe()} "
            f"of size {size}"
        )
    exclude_identity = gs.pl and M < size
    rng = np.random.default_rng(seed)
    out: list[AffinePerm] = []
    seen: set[bytes] = set()
    misses = 0
    while len(out) < M:
        p = _sample_one(gs, rng)
        if (p.key() in seen) or (exclude_identity and p.is_identity()):
            misses += 1
            if misses > _SAMPLE_PATIENCE * max(M, 1):
                raise ResourceCapError(
                    f"distinct sampling from {gs.describe()} stalled"
                )
            continue
        seen.add(p.key())
        out.append(p)
    return out


def sample_blta_pl(n: int, M: int, seed) -> list[AffinePerm]:
    """M distinct permutation-matrix members fixing the top variable."""
    return sample_group(stable_group(n), M, seed)


def sample_blta(S, n: int, M: int, seed) -> list[AffinePerm]:
    blocks = tuple(int(s) for s in S)
    gs = GroupSpec(blocks=blocks, pl=False)
    if gs.n != n:
        raise ConfigurationError(f"block sizes {blocks} do not sum to {n}")
    return sample_group(gs, M, seed)


@lru_cache(maxsize=8)
def _gl_members(s: int) -> tuple[bytes, ...]:
    out = []
    for bits in range(1 << (s * s)):
        cand = _bits_of(bits, s * s).reshape(s, s)
        if rank(BitMatrix.from_array(cand)) == s:
            out.append(cand.tobytes())
    return tuple(out)


def enumerate_group(gs: GroupSpec):
    """Yield every member; guarded against non-desk-scale groups."""
    size = group_size(gs)
    if size > _ENUM_CAP:
        raise ResourceCapError(
            f"group {gs.describe()} has {size} members; enumeration is "
            f"capped at {_ENUM_CAP}"
        )
    n = gs.n
    if gs.pl:
        for combo in itertools.product(
            *(itertools.permutations(range(s)) for s in gs.blocks)
        ):
            yield to_permutation(_assemble_pl(gs, combo), np.zeros(n, np.uint8))
        return
    sub_cells = [
        (r, c)
        for start, s in _block_slices(gs.blocks)
        for r in range(start + s, n)
        for c in range(start, start + s)
    ]
    diag_choices = [_gl_members(s) for s in gs.blocks]
    for diag in itertools.product(*diag_choices):
        A0 = np.zeros((n, n), np.uint8)
        for (start, s), blk in zip(_block_slices(gs.blocks), diag):
            A0[start:start + s, start:start + s] = np.frombuffer(
                blk, np.uint8
            ).reshape(s, s)
        for fill in range(1 << len(sub_cells)):
            A = A0.copy()
            for t, (rr, cc) in enumerate(sub_cells):
                A[rr, cc] = (fill >> t) & 1
            for bv in range(1 << n):
                yield to_permutation(BitMatrix.from_array(A), _bits_of(bv, n))


# ---- action on monomials and constraints ---------------------------------


def _is_permutation_matrix(A: BitMatrix) -> bool:
    arr = A.to_array()
    return (
        A.rows == A.cols
        and bool((arr.sum(axis=0) == 1).all())
        and bool((arr.sum(axis=1) == 1).all())
    )


def permute_monomial(p, k: int) -> int:
    """Image of transform row k under a permutation of the variables:
    bits(k') = A*bits(k). Degree (and index weight) is preserved."""
    A = p.A if isinstance(p, AffinePerm) else p
    if isinstance(p, AffinePerm) and p.b.any():
        raise ConfigurationError("monomial mapping needs a zero offset")
    if not _is_permutation_matrix(A):
        raise ConfigurationError("monomial mapping needs a permutation matrix")
    n = A.rows
    if not 0 <= k < (1 << n):
        raise ConfigurationError(f"row index {k} outside 0..{(1 << n) - 1}")
    y = (A.to_array() @ _bits_of(k, n)) & 1
    return int((y.astype(np.int64) << np.arange(n)).sum())


def post_transformation_matrix(p: AffinePerm) -> BitMatrix:
    """The N x N permutation matrix realizing p on codeword coordinates
    under vector-by-matrix application."""
    N = p.N
    words = np.zeros((N, (N + 7) >> 3), np.uint8)
    cols = np.arange(N)
    rows = p.perm[cols]
    words[rows, cols >> 3] |= np.uint8(1) << (cols & 7).astype(np.uint8)
    return BitMatrix(N, N, words)


def transform_constraint(V: BitMatrix, p: AffinePerm) -> BitMatrix:
    """Constraint matrix seen by a decoder fed with permuted channel
    values: V_T = V * (G * Tinv * G)^T."""
    if V.cols != p.N:
        raise ConfigurationError(
            f"constraint has {V.cols} columns but permutation acts on {p.N}"
        )
    G = kron_power(p.n)
    tinv = post_transformation_matrix(p)
    middle = mat_mul(mat_mul(G, tinv), G)
    return mat_mul(V, middle.transpose())


def is_stable(c: Constraint, p: AffinePerm) -> bool:
    """True iff the transformed constraint spans the same row space,
    i.e. the permuted code obeys the exact same freezing rules."""
    if c.spec.n != p.n:
        raise ConfigurationError("constraint and permutation disagree on n")
    V = c.V
    VT = transform_constraint(V, p)
    reduced, pivots = rref(VT)
    if len(pivots) < VT.rows:
        # Cannot happen for V of full row rank composed with an invertible
        # transform; if it ever does, an equality verdict would be bogus.
        raise RuntimeError("transformed constraint lost rank; verdict unsafe")
    stable = reduced == rref(V)[0]
    if stable:
        zero = mat_mul(c.W, VT.transpose())
        if zero.words.any():
            raise RuntimeError("stable verdict contradicts W * V_T^T != 0")
    return stable


@dataclass(frozen=True)
class StabilityReport:
    group: GroupSpec
    checked: int
    stable: int
    exhaustive: bool
    counterexamples: tuple[AffinePerm, ...]

    @property
    def fraction(self) -> float:
        return self.stable / self.checked if self.checked else float("nan")


def stability_survey(
    c: Constraint, gs: GroupSpec, samples: int, seed, max_counterexamples: int = 10
) -> StabilityReport:
    """Check is_stable over group members: exhaustively when the group
    is no larger than the requested sample count, otherwise over a
    seeded distinct sample."""
    if gs.n != c.spec.n:
        raise ConfigurationError("group and constraint disagree on n")
    size = group_size(gs)
    if size <= samples and size <= _ENUM_CAP:
        members = enumerate_group(gs)
        exhaustive = True
    else:
        members = sample_group(gs, samples, seed)
        exhaustive = False
    checked = stable = 0
    bad: list[AffinePerm] = []
    for p in members:
        checked += 1
        if is_stable(c, p):
            stable += 1
        elif len(bad) < max_counterexamples:
            bad.append(p)
    return StabilityReport(
        group=gs,
        checked=checked,
        stable=stable,
        exhaustive=exhaustive,
        counterexamples=tuple(bad),
    )


# ---- serialization --------------------------------------------------------


def perm_to_text(p: AffinePerm) -> str:
    lines = [f"n: {p.n}", "A:"]
    lines.extend(p.A.to_text().splitlines())
    lines.append("b: " + "".join(str(int(x)) for x in p.b))
    return "\n".join(lines) + "\n"


def perms_to_text(perms) -> str:
    return "\n".join(perm_to_text(p) for p in perms)


def perms_from_text(text: str) -> list[AffinePerm]:
    out = []
    lines = iter(text.splitlines())
    current: list[str] = []

    def flush(block: list[str]):
        if not block:
            return
        n = None
        bvec = None
        rows = []
        mode = ""
        for line in block:
            if line.startswith("n:"):
                n = int(line.split(":", 1)[1])
            elif line.startswith("A:"):
                mode = "A"
            elif line.startswith("b:"):
                bvec = [int(ch) for ch in line.split(":", 1)[1].strip()]
            elif mode == "A":
                rows.append(line.strip())
        if n is None or bvec is None or len(rows) != n:
            raise ConfigurationError("malformed permutation record")
        A = BitMatrix.from_text("\n".join(rows))
        out.append(to_permutation(A, np.asarray(bvec, np.uint8)))

    for line in lines:
        if line.strip():
            current.append(line)
        else:
            flush(current)
            current = []
    flush(current)
    return out

"""Stacked rescaled-DFT frames and the entry-shrinking doubling map.

The centerpiece is an r^2*n x r*n matrix built from r copies of the r*n-point
DFT, each copy rescaled column by column. Block k (1-based) zeroes its first
(k-1)(n-1) columns, weights the next n-1 columns by
sqrt(r - delta_1 - ... - delta_{k-1}), and weights the remaining columns by
sqrt(delta_k); the last block has no middle band. The delta schedule

    delta_k = r^2 n / (((r-k+1) n + k - 1) ((r-k) n + k))

is the unique choice that keeps every row square-sum equal to 1 given those
band weights, and it telescopes: delta_1 + ... + delta_k = rk / ((r-k) n + k),
so the total is r and every column square-sums to r. The result is a
unit-norm r-tight family whose Gram (divided by r) is a projection with
constant diagonal 1/r. For k <= r-1 the deltas shrink like 1/n, which is what
defeats uniform r-part Riesz bounds downstream.

The doubling map sends a family F to (1/sqrt 2) [[F, F], [F, -F]], doubling
both the vector count and the dimension while halving squared entry size,
preserving frame bounds and row norms exactly, and keeping the Gram matrix a
block-diagonal stack of copies of the original Gram.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError
from .frame_ops import FrameFamily
from .matrix_core import as_complex_matrix, dft_matrix, gram, scale_columns

__all__ = [
    "DEFAULT_ENTRY_BUDGET",
    "DeltaSchedule",
    "BlockBands",
    "BlockLayout",
    "StackedDftFrame",
    "delta_schedule",
    "block_layout",
    "build_nonpavable_r2",
    "build_nonpavable_general",
    "doubling_step",
    "doubled_family",
    "gram_block_residual",
    "restriction_identity_residual",
    "sidecar_dict",
]

# Largest matrix (in entries) doubled_family will materialize.
DEFAULT_ENTRY_BUDGET = 1 << 24

_SUM_TOL = 1e-12


def _delta_value(r: int, n: int, k: int) -> float:
    # Exact integer numerator and denominator, one correctly rounded division.
    num = r * r * n
    den = ((r - k + 1) * n + k - 1) * ((r - k) * n + k)
    return num / den


@dataclass(frozen=True)
class DeltaSchedule:
    """Column weight schedule delta_1..delta_r for an (r, n) stacked family.

    Invariants checked at construction: each delta_k equals the defining
    ratio exactly as evaluated in floating point, partial sums match the
    closed form rk/((r-k)n+k) to 1e-12, the total is r to 1e-12, and every
    proper partial sum stays strictly below r (so band weights are real).
    """

    r: int
    n: int
    deltas: tuple[float, ...]
    partial_sums: tuple[float, ...]

    def __post_init__(self):
        _validate_r_n(self.r, self.n)
        r, n = self.r, self.n
        if len(self.deltas) != r or len(self.partial_sums) != r:
            raise ValueError("need exactly r deltas and r partial sums")
        for k in range(1, r + 1):
            d = self.deltas[k - 1]
            if d != _delta_value(r, n, k):
                raise ValueError(f"delta_{k} = {d!r} does not match the schedule formula")
            closed = r * k / ((r - k) * n + k)
            if abs(self.partial_sums[k - 1] - closed) > _SUM_TOL:
                raise ValueError(f"partial sum through delta_{k} deviates from {closed}")
            if k < r and not self.partial_sums[k - 1] < r:
                raise ValueError(f"partial sum through delta_{k} must stay below r")
        if abs(self.partial_sums[-1] - r) > _SUM_TOL:
            raise ValueError(f"deltas must total {r}, got {self.partial_sums[-1]!r}")

    def residual_weight_sq(self, k: int) -> float:
        """r minus the partial sum through delta_{k-1} (the band weight, squared)."""
        if not 1 <= k <= self.r:
            raise ValueError(f"k must be in [1, {self.r}]")
        return self.r - (self.partial_sums[k - 2] if k >= 2 else 0.0)


def delta_schedule(r: int, n: int) -> DeltaSchedule:
    """Compute the delta schedule for block count r >= 2 and band size n >= 1.

    For n = 1 every delta equals 1 and the family degenerates to stacked
    unscaled DFTs (certificates downstream flag this case as vacuous).
    """
    _validate_r_n(r, n)
    deltas = []
    partials = []
    total = 0.0
    for k in range(1, r + 1):
        d = _delta_value(r, n, k)
        total += d
        deltas.append(d)
        partials.append(total)
    return DeltaSchedule(r, n, tuple(deltas), tuple(partials))


def _validate_r_n(r, n) -> None:
    for name, v in (("r", r), ("n", n)):
        if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
            raise ValueError(f"{name} must be an integer")
    if r < 2:
        raise ValueError("r must be >= 2")
    if n < 1:
        raise ValueError("n must be >= 1")


@dataclass(frozen=True)
class BlockBands:
    """Column spans and weights for one DFT block: zeros, band, tail."""

    zero_width: int
    band_width: int
    band_weight: float
    tail_width: int
    tail_weight: float


@dataclass(frozen=True)
class BlockLayout:
    """Per-block column layout of an (r, n) stacked family.

    Block k (1-based, k < r) has zero prefix (k-1)(n-1), a band of n-1
    columns at weight sqrt(r - sum of earlier deltas), and a tail at weight
    sqrt(delta_k). Block r replaces band and tail with a single tail of
    r+n-1 columns at weight sqrt(delta_r). Widths always total r*n.
    """

    r: int
    n: int
    blocks: tuple[BlockBands, ...]

    def __post_init__(self):
        if len(self.blocks) != self.r:
            raise ValueError("need exactly r blocks")
        width = self.r * self.n
        for k, b in enumerate(self.blocks, start=1):
            if b.zero_width + b.band_width + b.tail_width != width:
                raise ValueError(f"block {k} spans do not cover {width} columns")
            if min(b.zero_width, b.band_width, b.tail_width) < 0:
                raise ValueError(f"block {k} has a negative span")
            if b.band_weight < 0 or b.tail_weight < 0:
                raise ValueError(f"block {k} has a negative weight")

    def column_weights(self, k: int) -> np.ndarray:
        """Length-r*n weight vector for block k (1-based)."""
        if not 1 <= k <= self.r:
            raise ValueError(f"k must be in [1, {self.r}]")
        b = self.blocks[k - 1]
        w = np.zeros(self.r * self.n)
        w[b.zero_width : b.zero_width + b.band_width] = b.band_weight
        w[b.zero_width + b.band_width :] = b.tail_weight
        return w

    def band_columns(self, k: int) -> range:
        """Global column indices of block k's band (empty for k = r or n = 1)."""
        if not 1 <= k <= self.r:
            raise ValueError(f"k must be in [1, {self.r}]")
        b = self.blocks[k - 1]
        return range(b.zero_width, b.zero_width + b.band_width)


def _guarded_sqrt(v: float, what: str) -> float:
    # Tiny negative values are floating-point noise; anything worse is a bug
    # in the schedule and must not be silently clamped.
    if v < -1e-12:
        raise ValueError(f"{what} is negative ({v}), cannot take square root")
    return math.sqrt(max(v, 0.0))


def block_layout(r: int, n: int, schedule: DeltaSchedule | None = None) -> BlockLayout:
    """Column layout for the (r, n) stacked family."""
    _validate_r_n(r, n)
    if schedule is None:
        schedule = delta_schedule(r, n)
    if (schedule.r, schedule.n) != (r, n):
        raise ValueError("schedule does not match r, n")
    width = r * n
    blocks = []
    for k in range(1, r):
        zero = (k - 1) * (n - 1)
        band_w = _guarded_sqrt(schedule.residual_weight_sq(k), f"residual weight {k}")
        tail_w = _guarded_sqrt(schedule.deltas[k - 1], f"delta_{k}")
        blocks.append(BlockBands(zero, n - 1, band_w, width - k * (n - 1), tail_w))
    zero = (r - 1) * (n - 1)
    tail_w = _guarded_sqrt(schedule.deltas[r - 1], f"delta_{r}")
    blocks.append(BlockBands(zero, 0, 0.0, width - zero, tail_w))
    return BlockLayout(r, n, tuple(blocks))


@dataclass(frozen=True, eq=False)
class StackedDftFrame(FrameFamily):
    """A built (r, n) family together with its schedule and column layout."""

    r: int
    n: int
    schedule: DeltaSchedule
    layout: BlockLayout

    def __post_init__(self):
        super().__post_init__()
        r, n = self.r, self.n
        _validate_r_n(r, n)
        if self.vectors.shape != (r * r * n, r * n):
            raise ValueError(
                f"expected shape {(r * r * n, r * n)}, got {self.vectors.shape}"
            )
        if (self.schedule.r, self.schedule.n) != (r, n):
            raise ValueError("schedule does not match r, n")
        if (self.layout.r, self.layout.n) != (r, n):
            raise ValueError("layout does not match r, n")

    @property
    def vacuous(self) -> bool:
        """True when n = 1: every delta is 1 and the shrinking bound says nothing."""
        return self.n == 1


def build_nonpavable_general(r: int, n: int) -> StackedDftFrame:
    """Stack r rescaled copies of the r*n-point DFT per the block layout.

    Returns a unit-norm r-tight family of r^2*n vectors in dimension r*n.
    """
    _validate_r_n(r, n)
    schedule = delta_schedule(r, n)
    layout = block_layout(r, n, schedule)
    base = dft_matrix(r * n)
    stack = np.vstack([scale_columns(base, layout.column_weights(k)) for k in range(1, r + 1)])
    return StackedDftFrame(stack, r, n, schedule, layout, claimed_tightness=float(r))


def build_nonpavable_r2(n: int) -> StackedDftFrame:
    """Two-block special case, built directly from its closed-form weights.

    Top block: the 2n-point DFT with the first n-1 columns scaled by sqrt(2)
    and the rest by sqrt(2/(n+1)). Bottom block: first n-1 columns zeroed,
    the rest scaled by sqrt(2n/(n+1)). Agrees with
    build_nonpavable_general(2, n); both routes are kept and cross-checked
    in tests.
    """
    _validate_r_n(2, n)
    base = dft_matrix(2 * n)
    top = scale_columns(
        base, [math.sqrt(2.0)] * (n - 1) + [math.sqrt(2.0 / (n + 1))] * (n + 1)
    )
    bottom = scale_columns(
        base, [0.0] * (n - 1) + [math.sqrt(2.0 * n / (n + 1))] * (n + 1)
    )
    stack = np.vstack([top, bottom])
    return StackedDftFrame(
        stack, 2, n, delta_schedule(2, n), block_layout(2, n), claimed_tightness=2.0
    )


def doubling_step(family: FrameFamily) -> FrameFamily:
    """One doubling: F -> (1/sqrt 2) [[F, F], [F, -F]].

    Doubles count and dimension, multiplies every entry by 1/sqrt(2),
    preserves row norms and frame bounds exactly, and makes the Gram two
    diagonal copies of the input Gram.
    """
    V = family.vectors
    out = np.block([[V, V], [V, -V]]) / math.sqrt(2.0)
    return FrameFamily(out, claimed_tightness=family.claimed_tightness)


def doubled_family(
    family: FrameFamily, steps: int, entry_budget: int = DEFAULT_ENTRY_BUDGET
) -> FrameFamily:
    """Apply doubling_step `steps` times (steps = 0 returns the input).

    After K steps the result is 2^K * M x 2^K * d with max entry modulus
    2^(-K/2) times the input's, and its Gram is 2^K diagonal copies of the
    input Gram. Coefficient vectors supported on the first M indices see the
    original geometry: the squared norm of the combination they form is
    unchanged. Raises ResourceLimitError when the output would exceed
    entry_budget entries.
    """
    if not isinstance(steps, (int, np.integer)) or isinstance(steps, bool) or steps < 0:
        raise ValueError("steps must be a nonnegative integer")
    if entry_budget < 1:
        raise ValueError("entry_budget must be positive")
    entries = (family.count << steps) * (family.dim << steps)
    if entries > entry_budget:
        raise ResourceLimitError(
            f"doubled family would hold {entries} entries, over the budget of {entry_budget}"
        )
    out = family
    for _ in range(int(steps)):
        out = doubling_step(out)
    return out


def gram_block_residual(doubled: FrameFamily, seed_family: FrameFamily) -> float:
    """Max deviation of the doubled Gram from diagonal copies of the seed Gram.

    Computed block pair by block pair so the full Gram of a large doubled
    family is never materialized. The number of copies is inferred from the
    row counts, which must divide evenly.
    """
    M = seed_family.count
    if M == 0 or doubled.count % M != 0:
        raise ValueError("row count of doubled family must be a multiple of the seed's")
    copies = doubled.count // M
    G_seed = gram(seed_family.vectors)
    V = doubled.vectors
    worst = 0.0
    for i in range(copies):
        Ri = V[i * M : (i + 1) * M]
        for j in range(i, copies):
            block = Ri @ V[j * M : (j + 1) * M].conj().T
            dev = np.max(np.abs(block - G_seed)) if i == j else np.max(np.abs(block))
            worst = max(worst, float(dev))
    return worst


def restriction_identity_residual(
    doubled: FrameFamily, seed_family: FrameFamily, coefficients
) -> float:
    """Check that combinations over the first M rows keep their squared norm.

    coefficients is an array of shape (num_vectors, M); for each row a the
    residual |  ||a @ doubled[:M]||^2 - ||a @ seed||^2  | is computed and the
    largest is returned.
    """
    M = seed_family.count
    if doubled.count < M:
        raise ValueError("doubled family has fewer rows than the seed")
    C = np.asarray(coefficients, dtype=np.complex128)
    if C.ndim == 1:
        C = C[None, :]
    if C.ndim != 2 or C.shape[1] != M:
        raise ValueError(f"coefficients must have {M} columns")
    top = doubled.vectors[:M]
    lhs = np.sum(np.abs(C @ top) ** 2, axis=1)
    rhs = np.sum(np.abs(C @ seed_family.vectors) ** 2, axis=1)
    return float(np.max(np.abs(lhs - rhs))) if len(lhs) else 0.0


def sidecar_dict(family: StackedDftFrame) -> dict:
    """JSON-ready description of a built family: r, n, deltas, layout."""
    return {
        "r": family.r,
        "n": family.n,
        "deltas": list(family.schedule.deltas),
        "layout": [
            {
                "zero_width": b.zero_width,
                "band_width": b.band_width,
                "band_weight": b.band_weight,
                "tail_width": b.tail_width,
                "tail_weight": b.tail_weight,
            }
            for b in family.layout.blocks
        ],
    }

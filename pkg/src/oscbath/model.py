"""Physical configuration: bath spectrum, couplings, initial states, partitions.

Units follow the convention omega0 = 1 (all frequencies are multiples of the
central oscillator frequency, times are multiples of 1/omega0).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SystemConfig",
    "BathGrid",
    "PartitionSpec",
    "SuperpositionInit",
    "coherent_log_overlap",
    "coherent_overlap",
    "build_bath_grid",
    "centered_bipartition",
    "banded_blocks",
    "interleaved_bipartition",
    "normalize_superposition",
]


def coherent_log_overlap(alpha: complex, beta: complex) -> complex:
    """Exponent w with <alpha|beta> = exp(w) for two coherent amplitudes.

    w = -|alpha|^2/2 - |beta|^2/2 + conj(alpha)*beta.  Working with w instead
    of exp(w) keeps powers of the overlap well defined even when exp(w)
    underflows (|alpha - beta| large).
    """
    alpha = complex(alpha)
    beta = complex(beta)
    return -abs(alpha) ** 2 / 2.0 - abs(beta) ** 2 / 2.0 + alpha.conjugate() * beta


def coherent_overlap(alpha: complex, beta: complex) -> complex:
    """Inner product <alpha|beta> of two coherent states."""
    return cmath.exp(coherent_log_overlap(alpha, beta))


@dataclass(frozen=True)
class SystemConfig:
    """Central oscillator frequency plus the uniform bath band.

    Couplings default to gamma_k = coupling_amplitude / sqrt(n_bath) for
    every mode; pass an explicit `couplings` tuple to override per mode.
    `force_resonant` shifts the frequency comb so the mode nearest omega0
    lands exactly on resonance (an even, inclusive grid otherwise has none).
    """

    n_bath: int
    coupling_amplitude: float = 0.1
    band: tuple[float, float] = (0.5, 1.5)
    omega0: float = 1.0
    couplings: tuple[float, ...] | None = None
    force_resonant: bool = False

    def __post_init__(self):
        if self.n_bath < 1:
            raise ValueError(f"n_bath must be >= 1, got {self.n_bath}")
        if self.omega0 <= 0:
            raise ValueError("omega0 must be positive")
        if self.coupling_amplitude <= 0:
            raise ValueError("coupling_amplitude must be positive")
        low, high = self.band
        if not (0 < low <= high):
            raise ValueError(f"band must satisfy 0 < low <= high, got {self.band}")
        if self.n_bath > 1 and low == high:
            raise ValueError("degenerate band (low == high) is only valid for n_bath == 1")
        if self.couplings is not None:
            object.__setattr__(self, "couplings", tuple(float(g) for g in self.couplings))
            if len(self.couplings) != self.n_bath:
                raise ValueError("couplings override must have one entry per bath mode")
            if any(g <= 0 for g in self.couplings):
                raise ValueError("couplings must be positive")


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class BathGrid:
    """Frequencies, couplings and detunings of the bath modes, k = 1..N.

    detunings[k-1] = (omega0 - frequencies[k-1]) / 2.
    """

    omega0: float
    frequencies: np.ndarray
    couplings: np.ndarray
    detunings: np.ndarray

    def __post_init__(self):
        freqs = _readonly(np.array(self.frequencies, dtype=float))
        gams = _readonly(np.array(self.couplings, dtype=float))
        dets = _readonly(np.array(self.detunings, dtype=float))
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "couplings", gams)
        object.__setattr__(self, "detunings", dets)
        if freqs.ndim != 1 or freqs.size < 1:
            raise ValueError("frequencies must be a non-empty 1-d sequence")
        if gams.shape != freqs.shape or dets.shape != freqs.shape:
            raise ValueError("frequencies, couplings and detunings must have equal length")
        if self.omega0 <= 0:
            raise ValueError("omega0 must be positive")
        if freqs.size > 1 and np.any(np.diff(freqs) <= 0):
            raise ValueError("frequencies must be strictly increasing")
        if np.any(gams <= 0):
            raise ValueError("couplings must be positive")
        expected = (self.omega0 - freqs) / 2.0
        if not np.allclose(dets, expected, rtol=0.0, atol=1e-12):
            raise ValueError("detunings do not match (omega0 - omega_k)/2")

    @property
    def n(self) -> int:
        return self.frequencies.size


def build_bath_grid(config: SystemConfig) -> BathGrid:
    """Equally spaced frequency comb over the configured band.

    omega_k = low*omega0 + (k-1)*(high-low)*omega0/(N-1), endpoints inclusive;
    a single mode sits at the band midpoint.
    """
    w0 = config.omega0
    low, high = config.band
    if config.n_bath == 1:
        freqs = np.array([0.5 * (low + high) * w0])
    else:
        freqs = np.linspace(low * w0, high * w0, config.n_bath)
    if config.force_resonant:
        nearest = int(np.argmin(np.abs(freqs - w0)))
        freqs = freqs + (w0 - freqs[nearest])
    if config.couplings is not None:
        gams = np.array(config.couplings, dtype=float)
    else:
        gams = np.full(config.n_bath, config.coupling_amplitude / math.sqrt(config.n_bath))
    return BathGrid(w0, freqs, gams, (w0 - freqs) / 2.0)


@dataclass(frozen=True)
class PartitionSpec:
    """Disjoint blocks of 1-based bath indices, one label per block."""

    blocks: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        blocks = tuple(tuple(int(i) for i in blk) for blk in self.blocks)
        labels = tuple(str(lbl) for lbl in self.labels)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "labels", labels)
        if len(labels) != len(blocks):
            raise ValueError("need exactly one label per block")
        seen: set[int] = set()
        for blk in blocks:
            for idx in blk:
                if idx < 1:
                    raise ValueError(f"bath indices are 1-based, got {idx}")
                if idx in seen:
                    raise ValueError(f"blocks overlap at index {idx}")
                seen.add(idx)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def validate_range(self, n_bath: int) -> None:
        for blk in self.blocks:
            for idx in blk:
                if idx > n_bath:
                    raise ValueError(f"index {idx} exceeds bath size {n_bath}")

    def covers(self, n_bath: int) -> bool:
        """True when the blocks exactly tile {1..n_bath}."""
        union = set()
        for blk in self.blocks:
            union.update(blk)
        return union == set(range(1, n_bath + 1))

    def is_bipartition_of(self, n_bath: int) -> bool:
        return self.n_blocks == 2 and self.covers(n_bath)


def _resonance_order(grid: BathGrid) -> np.ndarray:
    # stable sort: exact detuning ties resolve toward the lower index
    return np.argsort(np.abs(grid.frequencies - grid.omega0), kind="stable")


def centered_bipartition(grid: BathGrid, size_b: int) -> PartitionSpec:
    """Block B = the size_b modes nearest resonance, block C = the rest."""
    if not 1 <= size_b <= grid.n:
        raise ValueError(f"size_b must be in [1, {grid.n}], got {size_b}")
    order = _resonance_order(grid)
    block_b = tuple(sorted(int(i) + 1 for i in order[:size_b]))
    block_c = tuple(sorted(int(i) + 1 for i in order[size_b:]))
    return PartitionSpec((block_b, block_c), ("B", "C"))


def banded_blocks(grid: BathGrid, n_blocks: int) -> PartitionSpec:
    """Equal-size blocks ranked by distance from resonance.

    Block 1 holds the modes nearest omega0; on a band symmetric about
    omega0 each block ends up with half its members above and half below
    resonance.
    """
    if n_blocks < 1 or grid.n % n_blocks != 0:
        raise ValueError(f"n_blocks must divide the bath size {grid.n}, got {n_blocks}")
    order = _resonance_order(grid)
    size = grid.n // n_blocks
    blocks = tuple(
        tuple(sorted(int(i) + 1 for i in order[j * size:(j + 1) * size]))
        for j in range(n_blocks)
    )
    return PartitionSpec(blocks, tuple(str(j + 1) for j in range(n_blocks)))


def interleaved_bipartition(grid: BathGrid) -> PartitionSpec:
    """Odd-index modes vs even-index modes.

    On a symmetric band the two combs mirror each other about resonance, so
    both halves absorb the same excitation share.
    """
    odd = tuple(range(1, grid.n + 1, 2))
    even = tuple(range(2, grid.n + 1, 2))
    return PartitionSpec((odd, even), ("B", "C"))


@dataclass(frozen=True)
class SuperpositionInit:
    """Two-branch coherent superposition of the central oscillator at t = 0.

    State ~ norm_const * (a|alpha0> + b|beta0>), bath in vacuum.
    log_overlap is w with <alpha0|beta0> = exp(w).
    """

    a: complex
    b: complex
    alpha0: complex
    beta0: complex
    norm_const: float
    log_overlap: complex

    def __post_init__(self):
        w = coherent_log_overlap(self.alpha0, self.beta0)
        if abs(w - self.log_overlap) > 1e-12 * max(1.0, abs(w)):
            raise ValueError("stored log_overlap does not match the amplitudes")
        n2inv = _norm_inverse_square(self.a, self.b, w)
        if n2inv <= 0:
            raise ValueError("branches cancel: normalization is undefined")
        expected = 1.0 / math.sqrt(n2inv)
        if abs(self.norm_const - expected) > 1e-12 * expected:
            raise ValueError("stored norm_const does not match its recomputation")

    @property
    def overlap(self) -> complex:
        """<alpha0|beta0>; may underflow to 0 for distant amplitudes."""
        return cmath.exp(self.log_overlap)

    @property
    def o0(self) -> float:
        """|<alpha0|beta0>| = exp(-|alpha0 - beta0|^2 / 2)."""
        return math.exp(self.log_overlap.real)


def _norm_inverse_square(a: complex, b: complex, w: complex) -> float:
    overlap = cmath.exp(w)
    return abs(a) ** 2 + abs(b) ** 2 + 2.0 * (a.conjugate() * b * overlap).real


def normalize_superposition(a: complex, b: complex,
                            alpha0: complex, beta0: complex) -> SuperpositionInit:
    """Normalization constant for a|alpha0> + b|beta0> plus cached overlap data.

    Raises when both weights vanish or the two branches cancel exactly
    (zero-norm state).
    """
    a = complex(a)
    b = complex(b)
    if a == 0 and b == 0:
        raise ValueError("at least one branch weight must be nonzero")
    w = coherent_log_overlap(alpha0, beta0)
    n2inv = _norm_inverse_square(a, b, w)
    if n2inv <= 0:
        raise ValueError(f"nonpositive squared inverse norm ({n2inv}); branches cancel")
    return SuperpositionInit(a, b, complex(alpha0), complex(beta0),
                             1.0 / math.sqrt(n2inv), w)

"""Channel coupling patterns and their generators.

A channel of ``N`` sites (``N`` even) is described by its ``N - 1`` nearest
neighbour couplings ``(J_1, ..., J_{N-1})`` in units of ``J_max = 1``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ._io import atomic_write_text
from .errors import (
    CouplingRangeError,
    DomainError,
    InvalidLengthError,
    NonPositiveCouplingError,
    UnsupportedConfigurationError,
    ValidationError,
)

__all__ = [
    "CouplingPattern",
    "EndCouplings",
    "make_uniform",
    "make_staggered",
    "make_random_paired",
    "validate",
    "read_pattern_csv",
    "write_pattern_csv",
    "pattern_to_csv",
]

STRONG_FIRST = "strong-first"
WEAK_FIRST = "weak-first"


def _check_couplings(couplings: tuple[float, ...]) -> None:
    n_sites = len(couplings) + 1
    if len(couplings) == 0 or n_sites % 2:
        raise InvalidLengthError(
            f"channel length N={n_sites} unsupported: N must be even and >= 2"
        )
    for i, j in enumerate(couplings, start=1):
        if not math.isfinite(j) or j <= 0.0:
            raise NonPositiveCouplingError(f"coupling J_{i}={j!r} must be positive")
        if j > 1.0:
            raise CouplingRangeError(f"coupling J_{i}={j!r} exceeds J_max = 1")


@dataclass(frozen=True)
class CouplingPattern:
    """Ordered channel couplings ``(J_1, ..., J_{N-1})``.

    Construction validates the pattern: ``N`` even, every coupling in
    ``(0, 1]``.
    """

    couplings: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(j) for j in self.couplings)
        object.__setattr__(self, "couplings", values)
        _check_couplings(values)

    @property
    def N(self) -> int:
        """Number of channel sites."""
        return len(self.couplings) + 1

    @property
    def M(self) -> int:
        return self.N // 2

    def __len__(self):
        return len(self.couplings)

    def __getitem__(self, i):
        return self.couplings[i]

    def __iter__(self):
        return iter(self.couplings)

    def as_array(self) -> np.ndarray:
        return np.array(self.couplings, dtype=float)

    def coupling(self, i: int) -> float:
        """Return ``J_i`` using the 1-based index of the physics notation."""
        if not 1 <= i <= len(self.couplings):
            raise IndexError(f"J_{i} outside 1..{len(self.couplings)}")
        return self.couplings[i - 1]

    def scaled(self, c: float) -> CouplingPattern:
        return CouplingPattern(tuple(c * j for j in self.couplings))


@dataclass(frozen=True)
class EndCouplings:
    """Sender and receiver couplings ``a_S`` and ``a_R`` to the channel ends."""

    a_S: float
    a_R: float

    def __post_init__(self):
        for name in ("a_S", "a_R"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value <= 0.0:
                raise DomainError(f"{name}={value!r} must be positive")
            object.__setattr__(self, name, value)

    @classmethod
    def symmetric(cls, a: float) -> EndCouplings:
        return cls(a, a)

    @property
    def is_symmetric(self) -> bool:
        return self.a_S == self.a_R

    def perturbative(self, N: int) -> bool:
        """True when both couplings satisfy ``a <= 1/sqrt(N)``.

        This is an advisory flag for the weak-coupling regime, never enforced.
        """
        bound = 1.0 / math.sqrt(N)
        return self.a_S <= bound and self.a_R <= bound


def validate(pattern: CouplingPattern | Iterable[float]) -> CouplingPattern:
    """Return ``pattern`` as a validated :class:`CouplingPattern`.

    Raises :class:`InvalidLengthError` for odd ``N``,
    :class:`NonPositiveCouplingError` for ``J_i <= 0`` and
    :class:`CouplingRangeError` for ``J_i > 1``.
    """
    if isinstance(pattern, CouplingPattern):
        _check_couplings(pattern.couplings)
        return pattern
    return CouplingPattern(tuple(pattern))


def _check_length(N) -> int:
    if isinstance(N, bool) or int(N) != N or N < 2 or N % 2:
        raise InvalidLengthError(f"N={N!r} must be an even integer >= 2")
    return int(N)


def make_uniform(N: int) -> CouplingPattern:
    """Homogeneous channel with all ``N - 1`` couplings equal to 1."""
    N = _check_length(N)
    return CouplingPattern((1.0,) * (N - 1))


def make_staggered(N: int, b: float, phase: str = WEAK_FIRST) -> CouplingPattern:
    """Alternating strong (1) and weak (``b``) couplings.

    ``"strong-first"`` gives ``(1, b, 1, ..., b, 1)`` and ``"weak-first"``
    gives ``(b, 1, b, ..., 1, b)``.
    """
    N = _check_length(N)
    if not (0.0 < b <= 1.0):
        raise DomainError(f"b={b!r} must lie in (0, 1]")
    if phase not in (STRONG_FIRST, WEAK_FIRST):
        raise DomainError(f"phase={phase!r} must be {STRONG_FIRST!r} or {WEAK_FIRST!r}")
    first, second = (1.0, float(b)) if phase == STRONG_FIRST else (float(b), 1.0)
    return CouplingPattern(tuple(first if i % 2 == 0 else second for i in range(N - 1)))


def make_random_paired(
    N: int, W: float, seed: int, *, stream: Sequence[int] = ()
) -> CouplingPattern:
    """Random couplings paired as ``J_1 = J_2, J_3 = J_4, ...`` around a fixed ``J_M = 1``.

    Each pair value is ``1 - chi`` with ``chi`` uniform on ``[0, W]``. Pairs on
    the right of the centre resume at ``J_{M+1} = J_{M+2}``, so the even and
    odd couplings cancel exactly in the closed form and ``Lambda_N = 1``.

    Parameters
    ----------
    N : int
        Channel length; ``N/2`` must be odd.
    W : float
        Disorder width in ``[0, 1)``.
    seed : int
        Root seed of the PCG64 generator.
    stream : sequence of int, optional
        Spawn key selecting an independent substream of ``seed`` (used by the
        ensemble sweeps to give every sample its own stream).
    """
    N = _check_length(N)
    if not (0.0 <= W < 1.0):
        raise DomainError(f"W={W!r} must lie in [0, 1)")
    M = N // 2
    if M % 2 == 0:
        raise UnsupportedConfigurationError(f"random paired channels need N/2 odd, got N={N}")
    sequence = np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))
    rng = np.random.Generator(np.random.PCG64(sequence))
    n_pairs = (M - 1) // 2
    values = 1.0 - rng.uniform(0.0, W, size=2 * n_pairs)
    couplings = np.empty(N - 1)
    couplings[M - 1] = 1.0
    left, right = values[:n_pairs], values[n_pairs:]
    couplings[0 : M - 1 : 2] = left
    couplings[1 : M - 1 : 2] = left
    couplings[M::2] = right
    couplings[M + 1 :: 2] = right
    return CouplingPattern(tuple(couplings.tolist()))


def pattern_to_csv(pattern: CouplingPattern) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"J_{i}" for i in range(1, len(pattern) + 1)])
    writer.writerow([repr(j) for j in pattern])
    return buf.getvalue()


def write_pattern_csv(pattern: CouplingPattern, path) -> Path:
    return atomic_write_text(path, pattern_to_csv(pattern))


def read_pattern_csv(path) -> CouplingPattern:
    """Read a single-row pattern file with header ``J_1,...,J_{N-1}``."""
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and not row[0].startswith("#")]
    if len(rows) != 2:
        raise ValidationError(f"{path}: expected a header row and one value row")
    header, values = rows
    expected = [f"J_{i}" for i in range(1, len(values) + 1)]
    if [h.strip() for h in header] != expected:
        raise ValidationError(f"{path}: header must be {','.join(expected)}")
    try:
        couplings = tuple(float(v) for v in values)
    except ValueError as exc:
        raise ValidationError(f"{path}: {exc}") from None
    return CouplingPattern(couplings)

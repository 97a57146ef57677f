"""Seeded correlation-amplitude sweeps and the equal-time comparison.

Every sweep row records, for one channel and one ``xi``, the end coupling
used, the closed-form ``Lambda_N``, the band-centre correlation amplitude
``C``, the numerical two-level gap and the perturbative transfer time
``pi / (2 a^2 |Lambda_N|)``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import __version__
from ._io import atomic_write_text
from .chain import (
    WEAK_FIRST,
    CouplingPattern,
    EndCouplings,
    make_random_paired,
    make_staggered,
    make_uniform,
)
from .dynamics import correlation_amplitude, peak_fidelity
from .effective import lambda_closed_form, perturbative_xi_for_equal_time
from .errors import DomainError, InvalidLengthError, UnsupportedConfigurationError
from .spectral import build_full_hamiltonian, diagonalize

__all__ = [
    "SweepConfig",
    "SweepRow",
    "SweepResult",
    "EqualTimeComparison",
    "default_xi_grid",
    "sweep_staggered",
    "sweep_random_paired",
    "equal_time_compare",
    "write_results",
    "format_results",
]

EQUAL_TIME = "equal-time"
FIXED = "fixed"
CSV_HEADER = ("pattern_id", "b_or_W", "sample", "xi", "a", "lambda", "C", "delta_lambda_numeric", "tau")


def default_xi_grid(xi_min: float = 1e-3, xi_max: float = 0.5, points: int = 60) -> tuple[float, ...]:
    return tuple(np.geomspace(xi_min, xi_max, points).tolist())


@dataclass(frozen=True)
class SweepConfig:
    """Parameters of a correlation-amplitude sweep.

    ``scaling`` selects the end coupling of the staggered channels:
    ``"equal-time"`` uses ``a = xi / sqrt(|Lambda_N|)`` so that every channel
    has the uniform channel's transfer time at ``a = xi``; ``"fixed"`` uses
    ``a = xi`` for every channel. Random paired channels have
    ``Lambda_N = 1`` and are unaffected.
    """

    N: int = 30
    xi_grid: tuple[float, ...] = field(default_factory=default_xi_grid)
    b_values: tuple[float, ...] = (0.9, 0.7, 0.5)
    W_values: tuple[float, ...] = (0.5, 0.99)
    samples: int = 1000
    seed: int = 0
    scaling: str = EQUAL_TIME
    output: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "xi_grid", tuple(float(x) for x in self.xi_grid))
        object.__setattr__(self, "b_values", tuple(float(b) for b in self.b_values))
        object.__setattr__(self, "W_values", tuple(float(w) for w in self.W_values))
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 2 or self.N % 2:
            raise InvalidLengthError(f"N={self.N!r} must be an even integer >= 2")
        if not self.xi_grid or any(not x > 0 for x in self.xi_grid):
            raise DomainError("xi_grid must be non-empty with positive values")
        if any(b <= a for a, b in zip(self.xi_grid, self.xi_grid[1:])):
            raise DomainError("xi_grid must be strictly ascending")
        if any(not 0 < b <= 1 for b in self.b_values):
            raise DomainError("b values must lie in (0, 1]")
        if any(not 0 <= w < 1 for w in self.W_values):
            raise DomainError("W values must lie in [0, 1)")
        if int(self.samples) != self.samples or self.samples < 1:
            raise DomainError("samples must be a positive integer")
        if self.scaling not in (EQUAL_TIME, FIXED):
            raise DomainError(f"scaling must be {EQUAL_TIME!r} or {FIXED!r}")

    def canonical(self) -> str:
        """Stable ``key=value`` rendering, excluding the output path."""
        parts = []
        for f in fields(self):
            if f.name == "output":
                continue
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = ",".join(repr(v) for v in value)
            parts.append(f"{f.name}={value}")
        return ";".join(parts)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]


@dataclass(frozen=True)
class SweepRow:
    pattern_id: str
    b_or_W: float
    sample: int
    xi: float
    a: float
    lam: float
    C: float
    delta_lambda_numeric: float
    tau: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    seed: int
    config_hash: str
    config: str = ""
    kind: str = ""

    def select(self, pattern_id: str, b_or_W: float | None = None, sample: int | None = None) -> list[SweepRow]:
        return [
            r
            for r in self.rows
            if r.pattern_id == pattern_id
            and (b_or_W is None or r.b_or_W == b_or_W)
            and (sample is None or r.sample == sample)
        ]


def _sweep_pattern(
    pattern: CouplingPattern, pattern_id: str, label: float, sample: int, xi_grid, scaling: str
) -> list[SweepRow]:
    lam = lambda_closed_form(pattern)
    scale = math.sqrt(abs(lam)) if scaling == EQUAL_TIME else 1.0
    rows = []
    for xi in xi_grid:
        ends = EndCouplings.symmetric(xi / scale)
        decomp = diagonalize(build_full_hamiltonian(pattern, ends))
        C, gap = correlation_amplitude(decomp)
        tau = math.pi / (2.0 * ends.a_S * ends.a_R * abs(lam))
        rows.append(SweepRow(pattern_id, label, sample, xi, ends.a_S, lam, C, gap, tau))
    return rows


def sweep_staggered(config: SweepConfig) -> SweepResult:
    """Sweep the weak-first staggered channels of ``config.b_values`` over ``xi``.

    A uniform (``b = 1``) reference block always comes first.
    """
    rows = _sweep_pattern(make_uniform(config.N), "uniform", 1.0, -1, config.xi_grid, config.scaling)
    for b in config.b_values:
        if b == 1.0:
            continue
        pattern = make_staggered(config.N, b, WEAK_FIRST)
        rows += _sweep_pattern(pattern, "staggered", b, -1, config.xi_grid, config.scaling)
    return SweepResult(tuple(rows), config.seed, config.digest(), config.canonical(), "staggered")


def _random_sample(args) -> list[SweepRow]:
    N, W, seed, sample, xi_grid = args
    pattern = make_random_paired(N, W, seed, stream=(sample,))
    return _sweep_pattern(pattern, "random_paired", W, sample, xi_grid, FIXED)


def sweep_random_paired(config: SweepConfig, workers: int = 1) -> SweepResult:
    """Sweep ``config.samples`` random paired channels per disorder width.

    Sample ``s`` draws its couplings from the substream ``(seed, s)``, so the
    result does not depend on ``workers`` or on evaluation order.
    """
    if (config.N // 2) % 2 == 0:
        raise UnsupportedConfigurationError(f"random paired channels need N/2 odd, got N={config.N}")
    rows = _sweep_pattern(make_uniform(config.N), "uniform", 0.0, -1, config.xi_grid, FIXED)
    jobs = [
        (config.N, W, config.seed, s, config.xi_grid)
        for W in config.W_values
        for s in range(config.samples)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_random_sample, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    else:
        blocks = [_random_sample(job) for job in jobs]
    for block in blocks:
        rows += block
    return SweepResult(tuple(rows), config.seed, config.digest(), config.canonical(), "random_paired")


@dataclass(frozen=True)
class EqualTimeComparison:
    N: int
    b: float
    xi: float
    tau: float
    lambda_staggered: float
    a_uniform: float
    a_staggered: float
    t_uniform: float
    F_uniform: float
    t_staggered: float
    F_staggered: float

    @property
    def deficit(self) -> float:
        return self.F_uniform - self.F_staggered


def equal_time_compare(N: int, b: float, xi: float) -> EqualTimeComparison:
    """Peak fidelities of the uniform channel at ``a = xi`` and the weak-first
    staggered channel at ``a = xi / sqrt(Lambda_N)``, both near ``pi/(2 xi^2)``."""
    if not xi > 0:
        raise DomainError(f"xi={xi!r} must be positive")
    uniform = make_uniform(N)
    staggered = make_staggered(N, b, WEAK_FIRST)
    tau = math.pi / (2.0 * xi * xi)
    peaks = []
    ends_used = []
    for pattern in (uniform, staggered):
        ends = perturbative_xi_for_equal_time(pattern, xi)
        model_tau = math.pi / (2.0 * ends.a_S * ends.a_R * abs(lambda_closed_form(pattern)))
        assert abs(model_tau / tau - 1.0) <= 1e-12
        decomp = diagonalize(build_full_hamiltonian(pattern, ends))
        peaks.append(peak_fidelity(decomp, tau))
        ends_used.append(ends)
    return EqualTimeComparison(
        N=N,
        b=float(b),
        xi=float(xi),
        tau=tau,
        lambda_staggered=lambda_closed_form(staggered),
        a_uniform=ends_used[0].a_S,
        a_staggered=ends_used[1].a_S,
        t_uniform=peaks[0][0],
        F_uniform=peaks[0][1],
        t_staggered=peaks[1][0],
        F_staggered=peaks[1][1],
    )


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def format_results(result: SweepResult) -> str:
    buf = io.StringIO()
    buf.write(f"# spinqst {__version__}\n")
    buf.write(f"# kind={result.kind}\n")
    buf.write(f"# seed={result.seed}\n")
    buf.write(f"# config={result.config}\n")
    buf.write(f"# config_hash={result.config_hash}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in result.rows:
        writer.writerow(
            [r.pattern_id, _fmt(r.b_or_W), r.sample, _fmt(r.xi), _fmt(r.a), _fmt(r.lam),
             _fmt(r.C), _fmt(r.delta_lambda_numeric), _fmt(r.tau)]
        )
    return buf.getvalue()


def write_results(result: SweepResult, path) -> Path:
    """Write the sweep CSV; an existing file is only replaced on success."""
    return atomic_write_text(path, format_results(result))

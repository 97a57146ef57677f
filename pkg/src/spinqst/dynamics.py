"""Exact single-excitation dynamics of the full sender-channel-receiver chain.

The propagator is applied through the eigendecomposition,
``<j| exp(-iHt) |S> = sum_k exp(-i eps_k t) v_{k,j} v_{k,S}``, with ``S`` the
first and ``R`` the last site of the chain.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._io import atomic_write_text
from .errors import DomainError
from .spectral import EigenDecomposition

__all__ = [
    "TransferSeries",
    "transition_amplitude",
    "site_amplitudes",
    "average_fidelity",
    "correlation_amplitude",
    "rabi_amplitude",
    "evolve_series",
    "peak_fidelity",
    "format_series",
    "write_series",
]

ABS_F_SLACK = 1e-9
PEAK_WINDOW = 0.2
PEAK_SAMPLES = 2001


@dataclass(frozen=True, eq=False)
class TransferSeries:
    times: np.ndarray
    abs_f: np.ndarray
    fidelity: np.ndarray
    rabi_abs_f: np.ndarray
    metadata: dict = field(default_factory=dict)


def transition_amplitude(decomp: EigenDecomposition, t):
    """``f(t) = <R| exp(-iHt) |S>``; ``t`` may be a scalar or an array."""
    v = decomp.vectors
    weights = v[:, -1] * v[:, 0]
    t = np.asarray(t, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(t, decomp.eigenvalues))
    f = phases @ weights
    return complex(f) if f.ndim == 0 else f


def site_amplitudes(decomp: EigenDecomposition, t: float, source: int = 0) -> np.ndarray:
    """Amplitudes ``<j| exp(-iHt) |source>`` on every site ``j``."""
    v = decomp.vectors
    return (np.exp(-1j * decomp.eigenvalues * t) * v[:, source]) @ v


def average_fidelity(abs_f):
    """Bloch-sphere averaged transfer fidelity ``1/2 + |f|/3 + |f|^2/6``."""
    x = np.asarray(abs_f, dtype=float)
    if np.any(x < -ABS_F_SLACK) or np.any(x > 1.0 + ABS_F_SLACK):
        raise DomainError("|f| must lie in [0, 1]")
    F = 0.5 + x / 3.0 + x * x / 6.0
    return float(F) if F.ndim == 0 else F


def _band_center_index(eigenvalues: np.ndarray) -> int:
    mags = np.abs(eigenvalues)
    tol = 1e-12 * max(1.0, float(mags.max()))
    candidates = np.flatnonzero(mags <= mags.min() + tol)
    return int(candidates[np.argmax(eigenvalues[candidates])])


def correlation_amplitude(decomp: EigenDecomposition) -> tuple[float, float]:
    """End-to-end correlation amplitude of the band-centre eigenstate.

    Returns ``(C, delta_lambda)`` where ``C = 2 |v_{k,R} v_{k,S}|`` for the
    eigenstate with the smallest ``|eps_k|`` (ties go to the positive
    branch) and ``delta_lambda`` is the gap between the two eigenvalues of
    smallest magnitude.
    """
    w = decomp.eigenvalues
    k = _band_center_index(w)
    v = decomp.vectors
    C = 2.0 * abs(v[k, -1] * v[k, 0])
    pair = np.argsort(np.abs(w), kind="stable")[:2]
    return float(C), float(abs(w[pair[0]] - w[pair[1]]))


def rabi_amplitude(C: float, delta_lambda: float, t):
    """Two-level approximation ``C |sin(delta_lambda t / 2)|``."""
    r = C * np.abs(np.sin(0.5 * delta_lambda * np.asarray(t, dtype=float)))
    return float(r) if r.ndim == 0 else r


def evolve_series(decomp: EigenDecomposition, t_grid, metadata: dict | None = None) -> TransferSeries:
    """Sample ``|f|``, ``F`` and the Rabi approximation on ``t_grid``."""
    times = np.array(t_grid, dtype=float).ravel()
    if times.size == 0:
        raise DomainError("time grid is empty")
    if np.any(np.diff(times) < 0):
        raise DomainError("time grid must be ascending")
    abs_f = np.minimum(np.abs(transition_amplitude(decomp, times)), 1.0)
    C, delta_lambda = correlation_amplitude(decomp)
    meta = dict(metadata or {})
    meta.update(C=C, delta_lambda=delta_lambda, tau=math.pi / delta_lambda)
    return TransferSeries(
        times=times,
        abs_f=abs_f,
        fidelity=average_fidelity(abs_f),
        rabi_abs_f=rabi_amplitude(C, delta_lambda, times),
        metadata=meta,
    )


def peak_fidelity(
    decomp: EigenDecomposition,
    tau_estimate: float,
    window: float = PEAK_WINDOW,
    samples: int = PEAK_SAMPLES,
) -> tuple[float, float]:
    """Best fidelity on ``samples`` uniform times in ``[(1-window) tau, (1+window) tau]``."""
    if not tau_estimate > 0:
        raise DomainError(f"tau_estimate={tau_estimate!r} must be positive")
    times = np.linspace((1.0 - window) * tau_estimate, (1.0 + window) * tau_estimate, samples)
    F = average_fidelity(np.minimum(np.abs(transition_amplitude(decomp, times)), 1.0))
    i = int(np.argmax(F))
    return float(times[i]), float(F[i])


def format_series(series: TransferSeries) -> str:
    meta = ", ".join(
        f"{k}={v:.12g}" if isinstance(v, float) else f"{k}={v}" for k, v in series.metadata.items()
    )
    buf = io.StringIO()
    buf.write(f"# {meta}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "abs_f", "fidelity", "rabi_abs_f"])
    for row in zip(series.times, series.abs_f, series.fidelity, series.rabi_abs_f):
        writer.writerow([f"{x:.12g}" for x in row])
    return buf.getvalue()


def write_series(series: TransferSeries, path) -> Path:
    """Write ``t,abs_f,fidelity,rabi_abs_f`` below a ``#`` metadata line."""
    return atomic_write_text(path, format_series(series))

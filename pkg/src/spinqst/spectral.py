"""Single-excitation Hamiltonians and their eigendecompositions.

In the one-excitation sector the XX chain is a real symmetric tridiagonal
matrix with zero diagonal whose off-diagonal entries are the couplings.
Zero-diagonal chains are bipartite (odd sites only couple to even sites), so
for even dimension the matrix is ``[[0, B], [B^T, 0]]`` in the odd/even
ordering, with ``B`` a square lower-bidiagonal block, and its eigenpairs come
in ``+eps / -eps`` pairs related by a sign flip on one sublattice.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np
import scipy.linalg

from ._io import atomic_write_text
from .chain import CouplingPattern, EndCouplings, validate
from .errors import ConvergenceError, NumericalFailure, UnsupportedConfigurationError, ValidationError

__all__ = [
    "TridiagonalHamiltonian",
    "EigenDecomposition",
    "SymmetryReport",
    "build_channel_hamiltonian",
    "build_full_hamiltonian",
    "diagonalize",
    "tridiagonal_ql",
    "particle_hole_report",
    "dump_spectrum",
]

RESIDUAL_TOL = 1e-10
MAX_SWEEPS = 50


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TridiagonalHamiltonian:
    """Real symmetric tridiagonal matrix with zero diagonal.

    ``off_diagonal[i]`` couples basis states ``i`` and ``i + 1``.
    """

    off_diagonal: np.ndarray

    def __post_init__(self):
        off = _frozen(self.off_diagonal)
        if off.ndim != 1 or off.size == 0:
            raise ValidationError("off_diagonal must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(off)) or np.any(off == 0.0):
            raise ValidationError("off-diagonal entries must be finite and nonzero")
        object.__setattr__(self, "off_diagonal", off)

    @property
    def dimension(self) -> int:
        return self.off_diagonal.size + 1

    @property
    def diagonal(self) -> np.ndarray:
        return np.zeros(self.dimension)

    def dense(self) -> np.ndarray:
        return np.diag(self.off_diagonal, 1) + np.diag(self.off_diagonal, -1)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Apply the matrix to ``x`` (vector or matrix of column vectors)."""
        x = np.asarray(x)
        out = np.zeros_like(x, dtype=np.result_type(x, float))
        e = self.off_diagonal.reshape((-1,) + (1,) * (x.ndim - 1))
        out[:-1] += e * x[1:]
        out[1:] += e * x[:-1]
        return out

    def norm(self) -> float:
        """Upper bound on the spectral norm (max absolute row sum)."""
        e = np.abs(self.off_diagonal)
        rows = np.zeros(self.dimension)
        rows[:-1] += e
        rows[1:] += e
        return float(rows.max())


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Full spectrum of a :class:`TridiagonalHamiltonian`.

    Attributes
    ----------
    eigenvalues : (n,) ndarray
        Ascending eigenvalues ``eps_k``.
    vectors : (n, n) ndarray
        Amplitude table, ``vectors[k, j] = <j|eps_k>``; row ``k`` is the
        ``k``-th eigenvector. The first component above ``1e-12`` in
        magnitude of every row is positive.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _frozen(self.eigenvalues))
        object.__setattr__(self, "vectors", _frozen(self.vectors))

    @property
    def dimension(self) -> int:
        return self.eigenvalues.size

    def orthonormality_error(self) -> float:
        v = self.vectors
        return float(np.abs(v @ v.T - np.eye(self.dimension)).max())

    def residual(self, H: TridiagonalHamiltonian) -> float:
        """``max_k ||H v_k - eps_k v_k||``."""
        v = self.vectors.T
        r = H.matvec(v) - v * self.eigenvalues
        return float(np.linalg.norm(r, axis=0).max())

    def reconstruct(self) -> np.ndarray:
        return (self.vectors.T * self.eigenvalues) @ self.vectors


class SymmetryReport(NamedTuple):
    eigenvalue_residual: float
    amplitude_residual: float


def build_channel_hamiltonian(pattern: CouplingPattern) -> TridiagonalHamiltonian:
    """The ``N x N`` channel matrix with off-diagonal ``(J_1, ..., J_{N-1})``."""
    pattern = validate(pattern)
    return TridiagonalHamiltonian(pattern.as_array())


def build_full_hamiltonian(pattern: CouplingPattern, ends: EndCouplings) -> TridiagonalHamiltonian:
    """The ``(N+2)``-site chain in site order ``(S, 1, ..., N, R)``."""
    pattern = validate(pattern)
    off = np.concatenate(([ends.a_S], pattern.as_array(), [ends.a_R]))
    return TridiagonalHamiltonian(off)


def tridiagonal_ql(diag, off, max_sweeps: int = MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric tridiagonal eigensolver, implicit-shift QL with Wilkinson shifts.

    Returns ``(w, z)`` with unsorted eigenvalues ``w`` and eigenvectors in the
    columns of ``z``. Raises :class:`ConvergenceError` if an eigenvalue needs
    more than ``max_sweeps`` QL sweeps.
    """
    d = np.array(diag, dtype=float)
    n = d.size
    e = np.zeros(n)
    e[: n - 1] = off
    z = np.eye(n)
    eps = np.finfo(float).eps
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if sweeps == max_sweeps:
                raise ConvergenceError(
                    f"QL did not converge for eigenvalue {l} of a {n}x{n} matrix "
                    f"after {max_sweeps} sweeps (remaining off-diagonal {abs(e[l]):.3e})"
                )
            sweeps += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + np.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi1 = z[:, i + 1].copy()
                z[:, i + 1] = s * z[:, i] + c * zi1
                z[:, i] = c * z[:, i] - s * zi1
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, z


def _bipartite(H: TridiagonalHamiltonian) -> tuple[np.ndarray, np.ndarray]:
    # The sublattice sign flip P = diag(1, -1, 1, ...) anticommutes with H, so
    # P v_k is an eigenvector for -eps_k. Only the positive half is solved for.
    n = H.dimension
    half = n // 2
    # bisection with a tiny absolute tolerance resolves small eigenvalues of a
    # zero-diagonal matrix to full relative accuracy
    w, z = scipy.linalg.eigh_tridiagonal(
        H.diagonal,
        H.off_diagonal,
        select="i",
        select_range=(half, n - 1),
        lapack_driver="stebz",
        tol=np.finfo(float).tiny,
    )
    upper = z.T.copy()
    # equal weight on both sublattices makes v_k and P v_k exactly orthogonal
    for part in (upper[:, 0::2], upper[:, 1::2]):
        part /= np.sqrt(2.0) * np.linalg.norm(part, axis=1, keepdims=True)
    flip = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    eigenvalues = np.concatenate((-w[::-1], w))
    vectors = np.concatenate(((upper * flip)[::-1], upper))
    return eigenvalues, vectors


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    big = np.abs(vectors) > 1e-12
    first = np.argmax(big, axis=1)
    signs = np.sign(vectors[np.arange(vectors.shape[0]), first])
    signs[signs == 0] = 1.0
    return vectors * signs[:, None]


def diagonalize(H: TridiagonalHamiltonian, method: str = "auto") -> EigenDecomposition:
    """Full eigendecomposition with certified residuals.

    Parameters
    ----------
    H : TridiagonalHamiltonian
    method : {"auto", "bipartite", "lapack", "ql"}
        ``"bipartite"`` solves for the positive half of the spectrum with
        LAPACK and mirrors it through the sublattice sign flip; it needs even
        dimension and reproduces particle-hole symmetry to the last bit. ``"lapack"`` calls LAPACK's tridiagonal
        solver and ``"ql"`` the implicit QL iteration of
        :func:`tridiagonal_ql`. ``"auto"`` picks ``"bipartite"`` when it
        applies and ``"lapack"`` otherwise.

    Raises
    ------
    NumericalFailure
        If the solver fails or the result misses the orthonormality or
        residual tolerance of ``1e-10`` (relative to ``||H||`` for the residual).
    """
    n = H.dimension
    if method == "auto":
        method = "bipartite" if n % 2 == 0 else "lapack"
    if method == "bipartite":
        if n % 2:
            raise UnsupportedConfigurationError(f"bipartite solver needs even dimension, got {n}")
        try:
            w, vectors = _bipartite(H)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure(f"LAPACK failed for {n}x{n} chain: {exc}") from exc
    elif method == "lapack":
        try:
            w, z = scipy.linalg.eigh_tridiagonal(H.diagonal, H.off_diagonal)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure(f"LAPACK failed for {n}x{n} chain: {exc}") from exc
        vectors = z.T
    elif method == "ql":
        w, z = tridiagonal_ql(H.diagonal, H.off_diagonal)
        order = np.argsort(w, kind="stable")
        w, vectors = w[order], z[:, order].T
    else:
        raise ValueError(f"unknown method {method!r}")

    decomp = EigenDecomposition(w, _fix_signs(vectors))
    residual = decomp.residual(H)
    ortho = decomp.orthonormality_error()
    if residual > RESIDUAL_TOL * H.norm() or ortho > RESIDUAL_TOL:
        raise NumericalFailure(
            f"{method} eigendecomposition of {n}x{n} chain not certified: "
            f"worst residual {residual:.3e}, orthonormality error {ortho:.3e}"
        )
    return decomp


def particle_hole_report(decomp: EigenDecomposition) -> SymmetryReport:
    """Residuals of ``eps_k = -eps_{-k}`` and ``|v_{k,j}| = |v_{-k,j}|``."""
    n = decomp.dimension
    if n % 2:
        raise UnsupportedConfigurationError(f"particle-hole pairing needs even dimension, got {n}")
    w = decomp.eigenvalues
    a = np.abs(decomp.vectors)
    return SymmetryReport(
        float(np.abs(w + w[::-1]).max()),
        float(np.abs(a - a[::-1]).max()),
    )


def dump_spectrum(decomp: EigenDecomposition, prefix) -> tuple[Path, Path]:
    """Write ``<prefix>_eigenvalues.csv`` (``k,epsilon_k``) and
    ``<prefix>_eigenvectors.csv`` (row ``k`` is ``v_k``)."""
    prefix = Path(prefix)
    values = io.StringIO()
    writer = csv.writer(values, lineterminator="\n")
    writer.writerow(["k", "epsilon_k"])
    for k, eps in enumerate(decomp.eigenvalues):
        writer.writerow([k, f"{eps:.12g}"])
    vectors = io.StringIO()
    writer = csv.writer(vectors, lineterminator="\n")
    writer.writerow([f"site_{j}" for j in range(decomp.dimension)])
    for row in decomp.vectors:
        writer.writerow([f"{x:.12g}" for x in row])
    return (
        atomic_write_text(prefix.with_name(prefix.name + "_eigenvalues.csv"), values.getvalue()),
        atomic_write_text(prefix.with_name(prefix.name + "_eigenvectors.csv"), vectors.getvalue()),
    )

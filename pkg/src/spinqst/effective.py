"""Channel-mediated end-to-end coupling and the effective two-level model.

Four independent routes give the coupling factor ``Lambda`` of an even
channel:

* :func:`lambda_spectral` sums ``v_{k,1} v_{k,N} / eps_k`` over the channel
  spectrum (this is the ``(1, N)`` element of the inverse channel matrix);
* :func:`lambda_closed_form` evaluates the alternating product
  ``(-1)**(M+1) * (J_2 J_4 ... J_{N-2}) / (J_1 J_3 ... J_{N-1})``;
* :func:`lambda_recursion_centered` grows the channel outwards from the
  central bond, ``L_j = -1 / (L_{j-1} J_{M-j} J_{M+j})``;
* :func:`lambda_recursion_appendix` grows it from the left end,
  ``L_{i+1} = -(J_{i-1} / J_i) L_{i-1}`` for odd ``i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import CouplingPattern, EndCouplings, validate
from .errors import DomainError, NumericalFailure, ResonanceError, UnsupportedConfigurationError
from .spectral import EigenDecomposition, build_channel_hamiltonian, diagonalize

__all__ = [
    "EffectiveModel",
    "lambda_spectral",
    "lambda_closed_form",
    "lambda_recursion_centered",
    "lambda_recursion_appendix",
    "lambda_all",
    "onsite_shifts",
    "effective_two_level",
    "perturbative_xi_for_equal_time",
]

RESONANCE_TOL = 1e-12


@dataclass(frozen=True)
class EffectiveModel:
    """Second-order two-level model for the sender/receiver pair.

    ``J_eff = -a_S a_R Lambda``, gap ``= 2 J_eff`` and ``tau = pi / |gap|``.
    """

    h_S: float
    h_R: float
    Lambda: float
    J_eff: float
    gap: float
    tau: float

    def matrix(self) -> np.ndarray:
        return np.array([[self.h_S, self.J_eff], [self.J_eff, self.h_R]])


def _check_channel(decomp: EigenDecomposition) -> None:
    if decomp.dimension % 2:
        raise UnsupportedConfigurationError(
            f"channel dimension {decomp.dimension} is odd; the off-resonant sums need even N"
        )
    smallest = float(np.abs(decomp.eigenvalues).min())
    if smallest <= RESONANCE_TOL:
        raise ResonanceError(
            f"channel eigenvalue {smallest:.3e} is within {RESONANCE_TOL:g} of zero"
        )


def _paired_sum(terms: np.ndarray) -> float:
    # adds the eps_k and -eps_k contributions before summing over k
    half = terms.size // 2
    return float(np.sum(terms[:half] + terms[::-1][:half]))


def lambda_spectral(decomp: EigenDecomposition) -> float:
    """``sum_k v_{k,1} v_{k,N} / eps_k`` over a channel decomposition."""
    _check_channel(decomp)
    v = decomp.vectors
    return _paired_sum(v[:, 0] * v[:, -1] / decomp.eigenvalues)


def lambda_closed_form(pattern: CouplingPattern) -> float:
    """Alternating-product closed form, accumulated in log space."""
    J = validate(pattern).as_array()
    M = J.size // 2 + 1
    log_magnitude = np.sum(np.log(J[1::2])) - np.sum(np.log(J[0::2]))
    sign = 1.0 if (M + 1) % 2 == 0 else -1.0
    try:
        return sign * math.exp(log_magnitude)
    except OverflowError:
        raise NumericalFailure(
            f"|Lambda| = exp({log_magnitude:.1f}) is not representable in double precision"
        ) from None


def lambda_recursion_centered(pattern: CouplingPattern) -> float:
    """Build ``Lambda`` outward from ``Lambda_{M,0} = 1/J_M``."""
    pattern = validate(pattern)
    J = pattern.coupling
    M = pattern.M
    value = 1.0 / J(M)
    for j in range(1, M):
        value = -1.0 / (value * J(M - j) * J(M + j))
    return value


def lambda_recursion_appendix(pattern: CouplingPattern) -> float:
    """Build ``Lambda`` from the left end, starting at ``Lambda_2 = 1/J_1``."""
    pattern = validate(pattern)
    J = pattern.coupling
    value = 1.0 / J(1)
    for i in range(3, pattern.N, 2):
        value = -(J(i - 1) / J(i)) * value
    return value


def lambda_all(pattern: CouplingPattern, decomp: EigenDecomposition | None = None) -> dict[str, float]:
    """All four routes plus their maximum pairwise relative deviation."""
    pattern = validate(pattern)
    if decomp is None:
        decomp = diagonalize(build_channel_hamiltonian(pattern))
    values = {
        "lambda_closed": lambda_closed_form(pattern),
        "lambda_spectral": lambda_spectral(decomp),
        "lambda_rec_centered": lambda_recursion_centered(pattern),
        "lambda_rec_appendix": lambda_recursion_appendix(pattern),
    }
    vs = list(values.values())
    dev = max(
        abs(x - y) / max(abs(x), abs(y))
        for i, x in enumerate(vs)
        for y in vs[i + 1 :]
    )
    values["max_rel_dev"] = dev
    return values


def onsite_shifts(decomp: EigenDecomposition) -> tuple[float, float]:
    """Second-order on-site shifts ``(h_S, h_R)`` of the two end spins."""
    _check_channel(decomp)
    v = decomp.vectors
    w = decomp.eigenvalues
    return _paired_sum(v[:, 0] ** 2 / w), _paired_sum(v[:, -1] ** 2 / w)


def effective_two_level(
    pattern: CouplingPattern,
    ends: EndCouplings,
    decomp: EigenDecomposition | None = None,
) -> EffectiveModel:
    pattern = validate(pattern)
    if decomp is None:
        decomp = diagonalize(build_channel_hamiltonian(pattern))
    h_S, h_R = onsite_shifts(decomp)
    lam = lambda_closed_form(pattern)
    J_eff = -ends.a_S * ends.a_R * lam
    gap = 2.0 * J_eff
    return EffectiveModel(h_S, h_R, lam, J_eff, gap, math.pi / abs(gap))


def perturbative_xi_for_equal_time(pattern: CouplingPattern, xi: float) -> EndCouplings:
    """End couplings ``a = xi / sqrt(|Lambda|)`` giving transfer time ``pi/(2 xi^2)``."""
    if not xi > 0:
        raise DomainError(f"xi={xi!r} must be positive")
    lam = lambda_closed_form(pattern)
    return EndCouplings.symmetric(xi / math.sqrt(abs(lam)))

"""Analytic Fock-state filter: heralded output, filter operator, hole amplitudes.

Setup: |phi> enters port a, vacuum port b, an ancilla |psi> port c. The first
splitter couples (a, b), the second (c, b); ports b and c are heralded on one
and zero photons. Splitter j has T_j = cos(theta_j), R_j = i sin(theta_j).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DegenerateSplitter,
    HoleUndefined,
    OperatorFormUndefined,
    ParityUndefined,
    ZeroProbability,
)
from .fock import FockVector, annihilation, normalize

ZERO_PROBABILITY = 1e-14


def transmittance(theta: float) -> complex:
    return complex(np.cos(theta))


def reflectance(theta: float) -> complex:
    return 1j * np.sin(theta)


def lambda_param(theta1: float, theta2: float) -> complex:
    """Lambda = R1^* T2^* / R2^*; real for real angles."""
    r2 = reflectance(theta2)
    if abs(r2) < 1e-12:
        raise DegenerateSplitter(f"theta2={theta2!r} gives R2 = 0")
    return np.conj(reflectance(theta1)) * np.conj(transmittance(theta2)) / np.conj(r2)


@dataclass(frozen=True)
class FilterConfig:
    """Splitter angles plus the two ancilla amplitudes that matter."""

    theta1: float
    theta2: float
    psi0: complex
    psi1: complex

    def __post_init__(self):
        if abs(self.psi0) ** 2 + abs(self.psi1) ** 2 > 1 + 1e-12:
            raise ValueError("|psi0|^2 + |psi1|^2 exceeds 1")
        # raises DegenerateSplitter early
        lambda_param(self.theta1, self.theta2)

    @classmethod
    def from_alpha(cls, theta1: float, theta2: float, alpha: complex) -> FilterConfig:
        """Coherent ancilla |alpha>: psi0 = e^{-|alpha|^2/2}, psi1 = alpha psi0."""
        psi0 = np.exp(-abs(alpha) ** 2 / 2)
        return cls(theta1, theta2, complex(psi0), complex(alpha * psi0))

    @classmethod
    def from_ratio(cls, theta1: float, theta2: float, alpha: complex) -> FilterConfig:
        """Ancilla (|0> + alpha|1>)/sqrt(1 + |alpha|^2).

        Same psi1/psi0 as |alpha>, hence the same normalized output, but it
        stays representable when e^{-|alpha|^2/2} underflows.
        """
        psi0 = 1 / np.sqrt(1 + abs(alpha) ** 2)
        return cls(theta1, theta2, complex(psi0), complex(alpha * psi0))

    @classmethod
    def from_ancilla(cls, theta1: float, theta2: float, psi: FockVector) -> FilterConfig:
        psi1 = psi[1] if psi.cutoff > 1 else 0.0
        return cls(theta1, theta2, complex(psi[0]), complex(psi1))

    @property
    def T1(self) -> complex:
        return transmittance(self.theta1)

    @property
    def T2(self) -> complex:
        return transmittance(self.theta2)

    @property
    def R1(self) -> complex:
        return reflectance(self.theta1)

    @property
    def R2(self) -> complex:
        return reflectance(self.theta2)

    @property
    def lam(self) -> complex:
        return lambda_param(self.theta1, self.theta2)


@dataclass(frozen=True)
class HeraldedResult:
    """Unnormalized collapsed state of mode a and its heralding probability."""

    collapsed: FockVector
    probability: float

    @cached_property
    def state(self) -> FockVector:
        return self.normalized()

    def normalized(self) -> FockVector:
        if self.probability < ZERO_PROBABILITY:
            raise ZeroProbability(f"heralding probability {self.probability:.3e}")
        return normalize(self.collapsed)


def filtered_state(phi: FockVector, config: FilterConfig, *, check: bool = True) -> HeraldedResult:
    """Mode-a output after detecting one photon in b and none in c.

    h_i = T1^i (phi_i psi1 R2^* + sqrt(i+1) phi_{i+1} psi0 R1^* T2^*), with
    phi_N taken as 0 at the top of the basis. ``p`` is sum |h_i|^2.

    Raises ZeroProbability when ``p`` < 1e-14 unless ``check`` is False.
    """
    amps = phi.amplitudes
    n = np.arange(phi.cutoff)
    shifted = np.zeros_like(amps)
    shifted[:-1] = np.sqrt(n[1:]) * amps[1:]
    c = config
    h = c.T1**n * (
        amps * c.psi1 * np.conj(c.R2)
        + shifted * c.psi0 * np.conj(c.R1) * np.conj(c.T2)
    )
    p = float(np.vdot(h, h).real)
    if check and p < ZERO_PROBABILITY:
        raise ZeroProbability(
            f"heralding probability {p:.3e} < {ZERO_PROBABILITY:g}; the filter "
            "removes every component (coherent inputs are not filtered, they are "
            "only attenuated or annihilated)"
        )
    return HeraldedResult(FockVector(h), p)


def hole_operator(config: FilterConfig, cutoff: int) -> np.ndarray:
    """Dense T1^{n} (a + psi1/(psi0 Lambda) I)."""
    if abs(config.psi0) < 1e-300:
        raise OperatorFormUndefined("psi0 = 0: use filtered_state directly")
    if config.psi1 == 0:
        shift = 0.0
    elif abs(config.lam) < 1e-300:
        raise OperatorFormUndefined("Lambda = 0 with psi1 != 0: the shift is infinite")
    else:
        shift = config.psi1 / (config.psi0 * config.lam)
    attenuation = np.diag(config.T1 ** np.arange(cutoff))
    return attenuation @ (annihilation(cutoff) + shift * np.eye(cutoff))


def alpha_for_hole(phi: FockVector, n: int, theta1: float, theta2: float) -> complex:
    """Coherent ancilla amplitude that removes |n> from the output.

    alpha = -Lambda sqrt(n+1) phi_{n+1} / phi_n.
    """
    if not 0 <= n < phi.cutoff - 1:
        raise HoleUndefined(f"hole index {n} needs cutoff > {n + 1}")
    if abs(phi[n]) <= 1e-12:
        raise HoleUndefined(f"|phi_{n}| = {abs(phi[n]):.3e}: component already absent")
    lam = lambda_param(theta1, theta2)
    return complex(-lam * np.sqrt(n + 1) * phi[n + 1] / phi[n])


def alpha_for_parity(
    gamma: complex, delta: float, theta1: float, theta2: float, parity: str
) -> complex:
    """Ancilla amplitude leaving a cat state with a single parity class.

    ``parity`` names the class that survives: "even" removes every odd
    component, "odd" removes every even component.
    """
    lam = lambda_param(theta1, theta2)
    e = np.exp(1j * delta)
    if parity == "even":
        num, den = 1 + e, 1 - e
    elif parity == "odd":
        num, den = 1 - e, 1 + e
    else:
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    if abs(den) <= 1e-12:
        raise ParityUndefined(f"delta={delta!r} makes the {parity} amplitude singular")
    return complex(-gamma * lam * num / den)

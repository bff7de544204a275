"""Photon statistics and quadrature diagnostics for single-mode pure states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CutoffTooSmall, NotNormalized, UndefinedForVacuum
from .fock import FockVector, annihilation, inner_product, number

VACUUM_VARIANCE = 0.25
SQUEEZE_SLACK = 1e-12
# metrics reject inputs further than this from unit norm
NORMALIZED_TOL = 1e-10


def _require_normalized(state: FockVector):
    n2 = state.norm_squared()
    if abs(n2 - 1.0) > NORMALIZED_TOL:
        raise NotNormalized(
            f"norm^2 = {n2!r}; normalize explicitly (e.g. HeraldedResult.normalized())"
        )


def photon_distribution(state: FockVector) -> np.ndarray:
    _require_normalized(state)
    return np.abs(state.amplitudes) ** 2


def mean_photon_number(state: FockVector) -> float:
    probs = photon_distribution(state)
    return float(np.dot(np.arange(probs.size), probs))


def fidelity(u: FockVector, v: FockVector) -> float:
    _require_normalized(u)
    _require_normalized(v)
    return float(min(1.0, abs(inner_product(u, v)) ** 2))


def mandel_q(state: FockVector) -> float:
    """Q = Var(n)/<n> - 1 from the photon-number distribution."""
    probs = photon_distribution(state)
    n = np.arange(probs.size, dtype=float)
    mean = float(np.dot(n, probs))
    if mean <= 1e-12:
        raise UndefinedForVacuum(f"<n> = {mean:.3e}; Q is undefined for the vacuum")
    var = float(np.dot((n - mean) ** 2, probs))
    return var / mean - 1.0


def mandel_q_operator(state: FockVector) -> float:
    """Same quantity through <n> and <n^2> with the number-operator matrix."""
    _require_normalized(state)
    num = number(state.cutoff)
    v = state.amplitudes
    mean = float(np.vdot(v, num @ v).real)
    if mean <= 1e-12:
        raise UndefinedForVacuum(f"<n> = {mean:.3e}; Q is undefined for the vacuum")
    second = float(np.vdot(v, num @ (num @ v)).real)
    return (second - mean**2) / mean - 1.0


@dataclass(frozen=True)
class QuadratureReport:
    mean_x: float
    mean_y: float
    var_x: float
    var_y: float

    @property
    def squeezed_x(self) -> bool:
        return self.var_x < VACUUM_VARIANCE - SQUEEZE_SLACK

    @property
    def squeezed_y(self) -> bool:
        return self.var_y < VACUUM_VARIANCE - SQUEEZE_SLACK

    def as_dict(self) -> dict:
        return {
            "mean_x": self.mean_x,
            "mean_y": self.mean_y,
            "var_x": self.var_x,
            "var_y": self.var_y,
            "squeezed_x": self.squeezed_x,
            "squeezed_y": self.squeezed_y,
        }


def quadratures(state: FockVector) -> QuadratureReport:
    """Moments of X = (a + a^dag)/2 and Y = (a - a^dag)/2i.

    The vector is padded by two levels so a^dag never falls off the basis;
    a state whose top level still carries weight is rejected since its
    moments depend on where the basis was cut.
    """
    _require_normalized(state)
    top = state.cutoff * abs(state.amplitudes[-1]) ** 2
    if top > 1e-10:
        raise CutoffTooSmall(f"top Fock level contributes {top:.3e} to the second moments")
    v = np.concatenate([state.amplitudes, np.zeros(2, dtype=complex)])
    a = annihilation(v.size)
    av = a @ v
    a2 = complex(np.vdot(v, a @ av))
    mean_a = complex(np.vdot(v, av))
    n_mean = float(np.vdot(av, av).real)
    # <X^2> = (<a^2> + <a^dag^2> + 2<n> + 1)/4
    x2 = (2 * a2.real + 2 * n_mean + 1) / 4
    y2 = (-2 * a2.real + 2 * n_mean + 1) / 4
    mean_x = mean_a.real
    mean_y = mean_a.imag
    return QuadratureReport(mean_x, mean_y, x2 - mean_x**2, y2 - mean_y**2)

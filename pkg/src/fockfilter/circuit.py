"""Brute-force three-mode simulation of the two-splitter filter.

Modes are ordered (a, b, c) along the tensor axes. Each splitter is applied
as the exact unitary exp[i theta (x^dag y + x y^dag)] one photon-number
sector at a time, so nothing is truncated as long as the total photon number
fits inside the per-mode cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import CutoffTooSmall, DimensionMismatch
from .filter import HeraldedResult
from .fock import FockVector

MODE_A, MODE_B, MODE_C = 0, 1, 2

# Exact unitaries on states reproduce the closed-form heralded amplitudes
# up to this state-independent factor: each surviving term carries exactly one
# reflection, and R^* = -R for R = i sin(theta).
ANALYTIC_GLOBAL_PHASE = -1.0


@dataclass(frozen=True)
class BeamSplitter:
    theta: float
    modes: tuple[int, int]

    @property
    def transmittance(self) -> complex:
        return complex(np.cos(self.theta))

    @property
    def reflectance(self) -> complex:
        return 1j * np.sin(self.theta)


@dataclass(frozen=True)
class ThreeModeState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 3 or len(set(amps.shape)) != 1:
            raise DimensionMismatch(f"expected an N x N x N tensor, got {amps.shape}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[0]

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def total_photon_mean(self) -> float:
        n = np.arange(self.cutoff)
        total = n[:, None, None] + n[None, :, None] + n[None, None, :]
        return float(np.sum(total * np.abs(self.amplitudes) ** 2))

    def pair_distribution(self, modes: tuple[int, int]) -> np.ndarray:
        """Probability of each total photon number on a mode pair."""
        x, y = modes
        probs = np.abs(self.amplitudes) ** 2
        marginal = probs.sum(axis=3 - x - y)
        if x > y:
            marginal = marginal.T
        n = self.cutoff
        out = np.zeros(2 * n - 1)
        for i in range(n):
            out[i : i + n] += marginal[i]
        return out


def _support(vec: FockVector) -> int:
    nz = np.flatnonzero(vec.amplitudes)
    return int(nz[-1]) if nz.size else 0


def tensor_input(phi: FockVector, psi: FockVector, cutoff: int | None = None) -> ThreeModeState:
    """|phi>|0>|psi> on a per-mode cutoff large enough to hold every photon.

    With ``cutoff=None`` the smallest lossless cutoff is chosen: the highest
    occupied levels of phi and psi must fit together in one mode.
    """
    need = _support(phi) + _support(psi) + 1
    if cutoff is None:
        cutoff = need
    if cutoff < need:
        raise DimensionMismatch(
            f"cutoff {cutoff} cannot hold |phi> (support {_support(phi)}) together "
            f"with |psi> (support {_support(psi)}); need >= {need}"
        )
    amps = np.zeros((cutoff, cutoff, cutoff), dtype=complex)
    p = phi.amplitudes[: min(phi.cutoff, cutoff)]
    q = psi.amplitudes[: min(psi.cutoff, cutoff)]
    amps[: p.size, 0, : q.size] = np.outer(p, q)
    return ThreeModeState(amps)


@lru_cache(maxsize=1024)
def sector_unitary(theta: float, total: int) -> np.ndarray:
    """exp[i theta (x^dag y + x y^dag)] on |k, total-k>, k = 0..total.

    The generator is real symmetric tridiagonal with off-diagonal
    sqrt((k+1)(total-k)), so an exact eigendecomposition suffices.
    """
    if total == 0:
        return np.ones((1, 1), dtype=complex)
    k = np.arange(total)
    off = np.sqrt((k + 1.0) * (total - k))
    w, v = eigh_tridiagonal(np.zeros(total + 1), off)
    u = (v * np.exp(1j * theta * w)) @ v.T
    u.setflags(write=False)
    return u


def apply_beam_splitter(state: ThreeModeState, bs: BeamSplitter) -> ThreeModeState:
    x, y = bs.modes
    other = 3 - x - y
    n = state.cutoff
    amps = np.moveaxis(state.amplitudes, (x, y, other), (0, 1, 2))
    out = np.zeros_like(amps)

    # sectors with total >= n do not fit; they must be empty
    kx, ky = np.indices((n, n))
    overflow = (kx + ky) >= n
    leaked = float(np.sum(np.abs(amps[overflow]) ** 2))
    if leaked > 1e-12:
        raise CutoffTooSmall(
            f"{leaked:.3e} probability in photon-number sectors beyond cutoff {n}"
        )

    for total in range(n):
        ix = np.arange(total + 1)
        block = amps[ix, total - ix, :]
        if not np.any(block):
            continue
        out[ix, total - ix, :] = sector_unitary(float(bs.theta), total) @ block
    return ThreeModeState(np.moveaxis(out, (0, 1, 2), (x, y, other)))


def postselect(state: ThreeModeState, b_count: int, c_count: int) -> HeraldedResult:
    """Project modes b and c onto |b_count>|c_count>; nothing is normalized."""
    if not (0 <= b_count < state.cutoff and 0 <= c_count < state.cutoff):
        raise DimensionMismatch(f"outcome ({b_count}, {c_count}) outside cutoff {state.cutoff}")
    vec = state.amplitudes[:, b_count, c_count].copy()
    return HeraldedResult(FockVector(vec), float(np.vdot(vec, vec).real))


def run_oracle(
    phi: FockVector,
    psi: FockVector,
    theta1: float,
    theta2: float,
    cutoff: int | None = None,
) -> HeraldedResult:
    """Full unitary evolution followed by the (1, 0) detection in (b, c).

    The collapsed vector is returned on phi's cutoff; the filter cannot raise
    the photon number of mode a.
    """
    state = tensor_input(phi, psi, cutoff)
    state = apply_beam_splitter(state, BeamSplitter(theta1, (MODE_A, MODE_B)))
    state = apply_beam_splitter(state, BeamSplitter(theta2, (MODE_C, MODE_B)))
    res = postselect(state, 1, 0)
    vec = res.collapsed.amplitudes
    if vec.size >= phi.cutoff:
        vec = vec[: phi.cutoff]
    else:
        vec = np.concatenate([vec, np.zeros(phi.cutoff - vec.size, dtype=complex)])
    return HeraldedResult(FockVector(vec), res.probability)

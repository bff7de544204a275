"""Single-mode states and operators on a truncated Fock space |0>..|N-1>."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.linalg import expm
from scipy.sparse.linalg import expm_multiply

from .errors import (
    CutoffExceeded,
    CutoffTooSmall,
    DimensionMismatch,
    ZeroVector,
)

DEFAULT_CUTOFF = 64
TAIL_WINDOW = 4
TAIL_TOL = 1e-10
NORM_TOL = 1e-12


@dataclass(frozen=True)
class FockVector:
    """Immutable complex amplitude vector in the photon-number basis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size == 0:
            raise DimensionMismatch("a Fock vector needs at least one amplitude")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def cutoff(self) -> int:
        return self.amplitudes.size

    def __len__(self) -> int:
        return self.amplitudes.size

    def __getitem__(self, n):
        return self.amplitudes[n]

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm_squared() - 1.0) <= tol

    def truncate(self, cutoff: int) -> FockVector:
        return FockVector(self.amplitudes[:cutoff])

    def pad(self, cutoff: int) -> FockVector:
        if cutoff < self.cutoff:
            raise DimensionMismatch(f"cannot pad cutoff {self.cutoff} down to {cutoff}")
        out = np.zeros(cutoff, dtype=complex)
        out[: self.cutoff] = self.amplitudes
        return FockVector(out)

    def scaled(self, factor: complex) -> FockVector:
        return FockVector(factor * self.amplitudes)


def _check_same_cutoff(u: FockVector, v: FockVector):
    if u.cutoff != v.cutoff:
        raise DimensionMismatch(f"cutoffs differ: {u.cutoff} vs {v.cutoff}")


def inner_product(u: FockVector, v: FockVector) -> complex:
    """<u|v>, conjugate-linear in ``u``."""
    _check_same_cutoff(u, v)
    return complex(np.vdot(u.amplitudes, v.amplitudes))


def norm(u: FockVector) -> float:
    return float(np.sqrt(u.norm_squared()))


def normalize(u: FockVector) -> FockVector:
    nrm = norm(u)
    if nrm < 1e-14:
        raise ZeroVector("cannot normalize a zero vector")
    return FockVector(u.amplitudes / nrm)


def tail_mass(u: FockVector, k: int = TAIL_WINDOW) -> float:
    """Probability mass on the top ``k`` basis states."""
    return float(np.sum(np.abs(u.amplitudes[-k:]) ** 2))


def check_tail(u: FockVector, what: str, k: int = TAIL_WINDOW, tol: float = TAIL_TOL):
    mass = tail_mass(u, k)
    if mass > tol:
        raise CutoffTooSmall(
            f"{what}: mass {mass:.3e} on the top {k} Fock states exceeds {tol:g} "
            f"at cutoff {u.cutoff}; increase the cutoff"
        )


# ----------------------------------------------------------------- operators


def annihilation(cutoff: int) -> np.ndarray:
    """<m|a|n> = sqrt(n) delta_{m,n-1}."""
    return np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1).astype(complex)


def creation(cutoff: int) -> np.ndarray:
    return annihilation(cutoff).conj().T


def number(cutoff: int) -> np.ndarray:
    return np.diag(np.arange(cutoff, dtype=float)).astype(complex)


def displacement_operator(gamma: complex, cutoff: int = DEFAULT_CUTOFF) -> np.ndarray:
    """Truncated exp(gamma a^dag - gamma^* a).

    Only the low-photon block is accurate; pad the cutoff when acting on
    states that reach high photon numbers.
    """
    if cutoff < 2:
        raise CutoffTooSmall("displacement needs cutoff >= 2")
    a = annihilation(cutoff)
    return expm(gamma * a.conj().T - np.conj(gamma) * a)


def _squeeze_generator(xi: complex, cutoff: int) -> np.ndarray:
    a = annihilation(cutoff)
    a2 = a @ a
    return 0.5 * (np.conj(xi) * a2 - xi * a2.conj().T)


def squeeze_operator(xi: complex, cutoff: int = DEFAULT_CUTOFF) -> np.ndarray:
    """Truncated exp[(xi^* a^2 - xi a^dag^2)/2] with xi = s e^{i phi}."""
    if cutoff < 2:
        raise CutoffTooSmall("squeezing needs cutoff >= 2")
    op = expm(_squeeze_generator(xi, cutoff))
    check_tail(FockVector(op[:, 0]), f"squeezed vacuum (|xi|={abs(xi):g})")
    return op


# -------------------------------------------------------------------- states


def vacuum(cutoff: int = DEFAULT_CUTOFF) -> FockVector:
    return fock_state(0, cutoff)


def fock_state(n: int, cutoff: int = DEFAULT_CUTOFF) -> FockVector:
    if not 0 <= n < cutoff:
        raise CutoffExceeded(f"|{n}> does not fit in cutoff {cutoff}")
    amps = np.zeros(cutoff, dtype=complex)
    amps[n] = 1.0
    return FockVector(amps)


def _coherent_amplitudes(alpha: complex, cutoff: int) -> np.ndarray:
    # recursion c_n = c_{n-1} alpha / sqrt(n) avoids factorial overflow
    amps = np.empty(cutoff, dtype=complex)
    amps[0] = np.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, cutoff):
        amps[n] = amps[n - 1] * alpha / np.sqrt(n)
    return amps


def coherent_state(alpha: complex, cutoff: int = DEFAULT_CUTOFF) -> FockVector:
    vec = normalize(FockVector(_coherent_amplitudes(alpha, cutoff)))
    check_tail(vec, f"coherent state (|alpha|={abs(alpha):g})")
    return vec


def squeezed_coherent_state(
    gamma: complex, xi: complex, cutoff: int = DEFAULT_CUTOFF
) -> FockVector:
    """D(gamma) S(xi)|0>, built at cutoff 2N and truncated back to N.

    The exponentials act on the vacuum directly (sparse generators), which
    matches the dense ``expm`` route to ~1e-15 but stays fast at N = 256.
    """
    padded = 2 * cutoff
    a = sparse.diags(np.sqrt(np.arange(1, padded, dtype=float)), 1, format="csc")
    a = a.astype(complex)
    a2 = a @ a
    vac = np.zeros(padded, dtype=complex)
    vac[0] = 1.0
    sq = expm_multiply(0.5 * (np.conj(xi) * a2 - xi * a2.conj().T), vac)
    out = expm_multiply(gamma * a.conj().T - np.conj(gamma) * a, sq)
    vec = normalize(FockVector(out[:cutoff]))
    check_tail(vec, f"squeezed coherent state (gamma={gamma:g}, xi={xi:g})")
    return vec


def squeezed_vacuum(xi: complex, cutoff: int = DEFAULT_CUTOFF) -> FockVector:
    return squeezed_coherent_state(0.0, xi, cutoff)


def cat_state(gamma: complex, delta: float, cutoff: int = DEFAULT_CUTOFF) -> FockVector:
    """C(|gamma> + e^{i delta}|-gamma>), normalized.

    Parity classes cancel exactly for delta in {0, pi} since both branches
    share the same magnitudes.
    """
    plus = _coherent_amplitudes(gamma, cutoff)
    sign = (-1.0) ** np.arange(cutoff)
    phase = np.exp(1j * delta)
    # snap the two parity-pure phases so the cancelled class is exactly zero
    if abs(phase - 1) < 1e-12:
        phase = 1.0
    elif abs(phase + 1) < 1e-12:
        phase = -1.0
    vec = normalize(FockVector(plus * (1.0 + phase * sign)))
    check_tail(vec, f"cat state (|gamma|={abs(gamma):g})")
    return vec

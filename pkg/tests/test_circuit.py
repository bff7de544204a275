import math

import numpy as np
import pytest

from fockfilter.circuit import (
    ANALYTIC_GLOBAL_PHASE,
    MODE_A,
    MODE_B,
    MODE_C,
    BeamSplitter,
    ThreeModeState,
    apply_beam_splitter,
    postselect,
    run_oracle,
    sector_unitary,
    tensor_input,
)
from fockfilter.errors import CutoffTooSmall, DimensionMismatch
from fockfilter.filter import FilterConfig, filtered_state
from fockfilter.fock import FockVector, coherent_state, fock_state, normalize
from fockfilter.metrics import fidelity

from oracles import heralded_by_enumeration

QUARTER = math.pi / 4


def random_phi(rng, support=13):
    amps = rng.normal(size=support) + 1j * rng.normal(size=support)
    return normalize(FockVector(amps))


def two_mode(state: ThreeModeState):
    """Amplitudes of modes (a, b) with c in vacuum."""
    return state.amplitudes[:, :, 0]


def test_beam_splitter_coefficients():
    bs = BeamSplitter(0.4, (MODE_A, MODE_B))
    assert abs(bs.transmittance) ** 2 + abs(bs.reflectance) ** 2 == pytest.approx(1.0, abs=1e-15)
    assert bs.reflectance.real == 0


def test_tensor_input():
    s = tensor_input(fock_state(0, 4), fock_state(0, 4), 6)
    assert s.amplitudes[0, 0, 0] == 1 and np.count_nonzero(s.amplitudes) == 1
    s = tensor_input(fock_state(1, 4), fock_state(0, 4), 6)
    assert s.amplitudes[1, 0, 0] == 1 and np.count_nonzero(s.amplitudes) == 1
    rng = np.random.default_rng(0)
    s = tensor_input(random_phi(rng, 6), random_phi(rng, 5))
    assert s.norm_squared() == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(DimensionMismatch):
        tensor_input(fock_state(5, 6), fock_state(5, 6), 8)


def test_single_photon_on_50_50():
    s = apply_beam_splitter(tensor_input(fock_state(1, 2), fock_state(0, 2)), BeamSplitter(QUARTER, (0, 1)))
    amp = two_mode(s)
    assert amp[1, 0] == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert amp[0, 1] == pytest.approx(1j / math.sqrt(2), abs=1e-15)


def test_hong_ou_mandel():
    # |1,1> on (a, b): prepare via a photon in a and one in b
    amps = np.zeros((3, 3, 3), dtype=complex)
    amps[1, 1, 0] = 1.0
    out = apply_beam_splitter(ThreeModeState(amps), BeamSplitter(QUARTER, (0, 1)))
    assert abs(out.amplitudes[1, 1, 0]) <= 1e-14
    assert abs(out.amplitudes[2, 0, 0]) ** 2 == pytest.approx(0.5, abs=1e-14)


def test_sector_unitary_matches_two_photon_expansion():
    # M=2 sector by hand: exp[i t G] with G = [[0, r2, 0], [r2, 0, r2], [0, r2, 0]]
    theta = 0.37
    c, s = math.cos(theta), math.sin(theta)
    # |2,0> -> c^2 |2,0> + i sqrt2 c s |1,1> - s^2 |0,2>
    col = sector_unitary(theta, 2)[:, 2]
    assert np.allclose(col, [-(s**2), 1j * math.sqrt(2) * c * s, c**2], atol=1e-14)


@pytest.mark.parametrize("theta", [0.1, 0.7, 1.3])
def test_unitarity_and_number_conservation(theta):
    rng = np.random.default_rng(5)
    state = tensor_input(random_phi(rng, 7), random_phi(rng, 6))
    for modes in ((MODE_A, MODE_B), (MODE_C, MODE_B), (MODE_A, MODE_C)):
        before_dist = state.pair_distribution(modes)
        out = apply_beam_splitter(state, BeamSplitter(theta, modes))
        assert out.norm_squared() == pytest.approx(1.0, abs=1e-12)
        assert out.total_photon_mean() == pytest.approx(state.total_photon_mean(), abs=1e-10)
        assert np.allclose(out.pair_distribution(modes), before_dist, atol=1e-12)
        state = out


def test_overflowing_sector_rejected():
    amps = np.zeros((3, 3, 3), dtype=complex)
    amps[2, 2, 0] = 1.0
    with pytest.raises(CutoffTooSmall):
        apply_beam_splitter(ThreeModeState(amps), BeamSplitter(0.3, (0, 1)))


def test_postselect_vacuum_and_completeness():
    vac = tensor_input(fock_state(0, 3), fock_state(0, 3), 3)
    assert postselect(vac, 1, 0).probability == 0.0
    rng = np.random.default_rng(2)
    state = tensor_input(random_phi(rng, 5), random_phi(rng, 5))
    state = apply_beam_splitter(state, BeamSplitter(0.5, (MODE_A, MODE_B)))
    state = apply_beam_splitter(state, BeamSplitter(1.1, (MODE_C, MODE_B)))
    n = state.cutoff
    total = sum(postselect(state, b, c).probability for b in range(n) for c in range(n))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_single_photon_input_probability():
    res = run_oracle(fock_state(1, 4), fock_state(0, 4), QUARTER, QUARTER)
    assert res.probability == pytest.approx(0.25, abs=1e-15)
    assert fidelity(res.normalized(), fock_state(0, 4)) == pytest.approx(1.0, abs=1e-15)


def test_single_ancilla_photon_probability():
    res = run_oracle(fock_state(0, 4), fock_state(1, 4), QUARTER, QUARTER)
    assert res.probability == pytest.approx(0.5, abs=1e-15)
    assert fidelity(res.normalized(), fock_state(0, 4)) == pytest.approx(1.0, abs=1e-15)


def test_coherent_inputs_stay_coherent():
    gamma, alpha = 0.9 - 0.3j, 0.4 + 0.2j
    res = run_oracle(coherent_state(gamma, 24), coherent_state(alpha, 24), 0.6, 0.9)
    out = res.normalized()
    expected = coherent_state(math.cos(0.6) * gamma, 24)
    assert fidelity(out, expected) == pytest.approx(1.0, abs=1e-12)


def test_oracle_matches_enumeration():
    rng = np.random.default_rng(11)
    for _ in range(5):
        phi = random_phi(rng, 9)
        psi = coherent_state(complex(*rng.uniform(-1, 1, 2)), 24)
        t1, t2 = rng.uniform(0.1, 1.4, 2)
        brute = run_oracle(phi, psi, t1, t2)
        ref = heralded_by_enumeration(phi.amplitudes, psi[0], psi[1], t1, t2)
        assert np.allclose(brute.collapsed.amplitudes, ref, atol=1e-12)


def test_oracle_equivalence_random_cases():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        phi = random_phi(rng, int(rng.integers(2, 14)))
        alpha = 1.5 * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())
        psi = coherent_state(alpha, 24)
        t1, t2 = rng.uniform(0.1, 1.4, 2)
        brute = run_oracle(phi, psi, t1, t2)
        analytic = filtered_state(phi, FilterConfig.from_ancilla(t1, t2, psi), check=False)
        diff = brute.collapsed.amplitudes - ANALYTIC_GLOBAL_PHASE * analytic.collapsed.amplitudes
        assert np.max(np.abs(diff)) <= 1e-9
        assert brute.probability == pytest.approx(analytic.probability, abs=1e-10)


def test_only_first_two_ancilla_amplitudes_matter():
    rng = np.random.default_rng(7)
    phi = random_phi(rng, 8)
    psi0, psi1 = 0.6, 0.3 - 0.2j
    rest = math.sqrt(1 - abs(psi0) ** 2 - abs(psi1) ** 2)
    outs = []
    for _ in range(3):
        tail = rng.normal(size=6) + 1j * rng.normal(size=6)
        tail *= rest / np.linalg.norm(tail)
        psi = FockVector(np.concatenate([[psi0, psi1], tail]))
        assert psi.is_normalized()
        outs.append(run_oracle(phi, psi, 0.5, 0.8).collapsed.amplitudes)
    assert np.allclose(outs[0], outs[1], atol=1e-10)
    assert np.allclose(outs[0], outs[2], atol=1e-10)

"""SLH node constructors, composition rules, and the tunable-coupling loop."""

import cmath
import math

import numpy as np
import pytest

from phoncirc import slh
from phoncirc.errors import DomainError, PortMismatch, SingularLoop

KAPPA_E = 2 * math.pi * 300e3
KAPPA_I = 2 * math.pi * 1.0


def random_passive_triplet(rng, n_ports, n_modes):
    z = rng.standard_normal((n_ports, n_ports)) + 1j * rng.standard_normal((n_ports, n_ports))
    q, r = np.linalg.qr(z)
    s = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    length = rng.standard_normal((n_ports, n_modes)) + 1j * rng.standard_normal((n_ports, n_modes))
    h = rng.standard_normal((n_modes, n_modes)) + 1j * rng.standard_normal((n_modes, n_modes))
    return slh.SLHTriplet(s, length, (h + h.conj().T) / 2)


def triplets_close(a, b, tol=1e-12):
    def same(x, y):
        return x.shape == y.shape and (x.size == 0 or np.max(np.abs(x - y)) < tol)
    return same(a.S, b.S) and same(a.L, b.L) and same(a.H, b.H)


# --- node constructors ----------------------------------------------------------

def test_cavity_node_structure():
    g = slh.cavity_node(KAPPA_E, KAPPA_I)
    assert g.n_ports == 3 and g.n_modes == 1
    assert np.array_equal(g.S, np.eye(3))
    assert np.allclose(g.L[:, 0], [math.sqrt(KAPPA_E), math.sqrt(KAPPA_E), math.sqrt(KAPPA_I)])
    assert g.H[0, 0] == 0.0


def test_cavity_node_zero_rates():
    g = slh.cavity_node(0.0, 0.0)
    assert np.all(g.L == 0.0)


def test_cavity_node_detuning():
    g = slh.cavity_node(KAPPA_E, 0.0, detuning=-KAPPA_E * math.sin(math.pi / 2))
    assert g.H[0, 0] == pytest.approx(-KAPPA_E)


def test_cavity_node_rejects_negative_rates():
    with pytest.raises(DomainError):
        slh.cavity_node(-1.0, 0.0)


def test_phase_node():
    assert slh.phase_node(0.0).S[0, 0] == 1.0
    assert slh.phase_node(math.pi).S[0, 0] == pytest.approx(-1.0)
    for theta in (0.3, 2.0, -1.1):
        assert abs(slh.phase_node(theta).S[0, 0]) == pytest.approx(1.0)


def test_trivial_node():
    two = slh.trivial_node(2)
    assert np.array_equal(two.S, np.eye(2)) and two.n_modes == 0
    assert slh.trivial_node(1).S[0, 0] == 1.0
    joined = slh.concatenate(slh.trivial_node(1), slh.trivial_node(1))
    assert triplets_close(joined, two)
    with pytest.raises(DomainError):
        slh.trivial_node(0)


# --- concatenation and series ----------------------------------------------------

def test_concatenate_phase_with_trivial():
    theta = 0.77
    g = slh.concatenate(slh.phase_node(theta), slh.trivial_node(2))
    assert g.n_ports == 3
    assert np.allclose(np.diagonal(g.S), [cmath.exp(1j * theta), 1.0, 1.0])


def test_concatenate_counts_add():
    rng = np.random.default_rng(0)
    a = random_passive_triplet(rng, 2, 1)
    b = random_passive_triplet(rng, 3, 2)
    g = slh.concatenate(a, b)
    assert g.n_ports == 5 and g.n_modes == 3


def test_series_phases_compose():
    a, b = 0.4, 1.3
    g = slh.series(slh.phase_node(b), slh.phase_node(a))
    assert g.S[0, 0] == pytest.approx(cmath.exp(1j * (a + b)))


def test_series_identity():
    rng = np.random.default_rng(1)
    g = random_passive_triplet(rng, 3, 2)
    assert triplets_close(slh.series(slh.trivial_node(3), g), g)
    assert triplets_close(slh.series(g, slh.trivial_node(3)), g)


def test_series_port_mismatch():
    with pytest.raises(PortMismatch):
        slh.series(slh.trivial_node(2), slh.trivial_node(3))


def test_compositions_preserve_structure():
    rng = np.random.default_rng(2)
    for _ in range(20):
        a = random_passive_triplet(rng, 3, 2)
        b = random_passive_triplet(rng, 3, 1)
        for g in (slh.series(b, a), slh.concatenate(a, b),
                  slh.feedback(slh.series(b, a), 1, 2)):
            n = g.n_ports
            assert np.max(np.abs(g.S @ g.S.conj().T - np.eye(n))) < 1e-10
            assert np.max(np.abs(g.H - g.H.conj().T)) < 1e-10


def test_series_associative():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a = random_passive_triplet(rng, 2, 1)
        b = random_passive_triplet(rng, 2, 2)
        c = random_passive_triplet(rng, 2, 1)
        left = slh.series(slh.series(c, b), a)
        right = slh.series(c, slh.series(b, a))
        assert triplets_close(left, right, tol=1e-11)


def test_concatenate_associative():
    rng = np.random.default_rng(4)
    a = random_passive_triplet(rng, 1, 1)
    b = random_passive_triplet(rng, 2, 1)
    c = random_passive_triplet(rng, 1, 2)
    assert triplets_close(slh.concatenate(slh.concatenate(a, b), c),
                          slh.concatenate(a, slh.concatenate(b, c)))


# --- feedback ---------------------------------------------------------------------

def test_feedback_uncorrected_loop_closed_form():
    for theta in (0.0, 0.4, 1.9, math.pi, 5.0):
        chain = slh.series(slh.concatenate(slh.phase_node(theta), slh.trivial_node(2)),
                           slh.cavity_node(KAPPA_E, KAPPA_I))
        got = slh.feedback(chain, out_port=1, in_port=2)
        want = slh.tunable_coupling_closed_form(theta, KAPPA_E, KAPPA_I, corrected=False)
        scale = math.sqrt(KAPPA_E)
        assert np.max(np.abs(got.S - want.S)) < 1e-12
        assert np.max(np.abs(got.L - want.L)) < 1e-12 * scale
        assert np.max(np.abs(got.H - want.H)) < 1e-12 * KAPPA_E


def test_feedback_unit_gain_loop_raises():
    swap = slh.SLHTriplet(np.array([[0.0, 1.0], [1.0, 0.0]]),
                          np.zeros((2, 0)), np.zeros((0, 0)))
    with pytest.raises(SingularLoop):
        slh.feedback(swap, out_port=1, in_port=2)


def test_feedback_same_port_rejected():
    with pytest.raises(DomainError):
        slh.feedback(slh.trivial_node(2), 1, 1)


def test_feedback_pass_through_on_trivial():
    # distinct-port feedback on the trivial 2-port has zero loop gain and
    # reduces to a single pass-through channel
    g = slh.feedback(slh.trivial_node(2), 1, 2)
    assert g.n_ports == 1 and g.S[0, 0] == pytest.approx(1.0)


def test_corrected_loop_matches_closed_form():
    rng = np.random.default_rng(5)
    for theta in rng.uniform(0.0, 2 * math.pi, 100):
        got = slh.tunable_coupling_loop(theta, KAPPA_E, KAPPA_I)
        want = slh.tunable_coupling_closed_form(theta, KAPPA_E, KAPPA_I)
        assert np.max(np.abs(got.S - want.S)) < 1e-12
        assert np.max(np.abs(got.L - want.L)) < 1e-12 * math.sqrt(KAPPA_E)
        assert np.max(np.abs(got.H)) < 1e-12 * KAPPA_E


def test_input_output_relation_emerges():
    # a_out = a_in + 2 sqrt(kappa_e) cos(theta/2) a_c: identity scattering
    # plus a real coupling row, with no special-casing in the composition
    theta = 1.1
    g = slh.tunable_coupling_loop(theta, KAPPA_E, 0.0)
    assert np.allclose(g.S, np.eye(2), atol=1e-12)
    expected = 2 * math.sqrt(KAPPA_E) * math.cos(theta / 2)
    assert g.L[0, 0] == pytest.approx(expected, abs=1e-9)
    assert abs(g.L[0, 0].imag) < 1e-9


# --- master equation coefficients -------------------------------------------------

def test_master_eq_corrected_network():
    theta = 0.8
    g = slh.tunable_coupling_loop(theta, KAPPA_E, KAPPA_I)
    eq = slh.master_eq_coeffs(g)
    drift = -0.5 * (4 * KAPPA_E * math.cos(theta / 2) ** 2 + KAPPA_I)
    assert eq.drift[0, 0] == pytest.approx(drift, rel=1e-12)
    assert eq.input_coupling[0, 0] == pytest.approx(-2 * math.sqrt(KAPPA_E) * math.cos(theta / 2), rel=1e-12)
    assert eq.input_coupling[0, 1] == pytest.approx(-math.sqrt(KAPPA_I), rel=1e-12)


def test_master_eq_decoupled_at_pi():
    g = slh.tunable_coupling_loop(math.pi, KAPPA_E, KAPPA_I)
    eq = slh.master_eq_coeffs(g)
    assert eq.drift[0, 0] == pytest.approx(-0.5 * KAPPA_I, abs=1e-6)
    assert abs(eq.input_coupling[0, 0]) < 1e-6


def test_master_eq_uncorrected_network():
    theta = 0.6
    g = slh.tunable_coupling_loop(theta, KAPPA_E, KAPPA_I, corrected=False)
    eq = slh.master_eq_coeffs(g)
    want = (-1j * KAPPA_E * math.sin(theta)
            - KAPPA_E * (1 + math.cos(theta)) - 0.5 * KAPPA_I)
    assert eq.drift[0, 0] == pytest.approx(want, rel=1e-12)
    assert eq.input_coupling[0, 0] == pytest.approx(
        -math.sqrt(KAPPA_E) * (1 + cmath.exp(1j * theta)), rel=1e-12)


def test_drift_eigenvalues_passive():
    rng = np.random.default_rng(6)
    for _ in range(10):
        g = random_passive_triplet(rng, 2, 2)
        eq = slh.master_eq_coeffs(g)
        assert np.all(np.linalg.eigvals(eq.drift).real <= 1e-10)


# --- effective rate -----------------------------------------------------------------

def test_effective_rate():
    assert slh.effective_rate(0.0, KAPPA_E) == pytest.approx(4 * KAPPA_E)
    assert slh.effective_rate(math.pi, KAPPA_E) == pytest.approx(0.0, abs=1e-9)
    assert slh.effective_rate(math.pi / 2, KAPPA_E) == pytest.approx(2 * KAPPA_E)
    assert slh.effective_rate(0.9, KAPPA_E) == pytest.approx(
        abs(2 * cmath.exp(0.45j) * math.sqrt(KAPPA_E) * math.cos(0.45)) ** 2, rel=1e-12)


# --- network description runner ------------------------------------------------------

def loop_network_doc(theta):
    return {
        "nodes": [
            {"name": "cav", "kind": "cavity",
             "params": {"kappa_e_hz": 300e3, "kappa_i_hz": 1.0}},
            {"name": "ph", "kind": "phase", "params": {"theta_rad": theta}},
            {"name": "t2", "kind": "trivial", "params": {"n": 2}},
        ],
        "script": [
            {"op": "concat", "args": ["ph", "t2"], "name": "stage"},
            {"op": "series", "args": ["stage", "cav"], "name": "chain"},
            {"op": "feedback", "args": ["chain", 1, 2]},
        ],
    }


def test_run_network_loop_matches_closed_form():
    theta = 1.3
    got = slh.run_network(loop_network_doc(theta))
    want = slh.tunable_coupling_closed_form(theta, KAPPA_E, KAPPA_I, corrected=False)
    assert np.max(np.abs(got.S - want.S)) < 1e-12
    assert np.max(np.abs(got.L - want.L)) < 1e-9


def test_run_network_echoes_single_node():
    doc = {"nodes": [{"name": "p", "kind": "phase", "params": {"theta_rad": 0.5}}],
           "script": []}
    got = slh.run_network(doc)
    assert got.S[0, 0] == pytest.approx(cmath.exp(0.5j))


def test_run_network_rejects_unknown_kind():
    with pytest.raises(DomainError):
        slh.run_network({"nodes": [{"name": "x", "kind": "squeezer", "params": {}}]})

"""Composition algebra for linear passive SLH network nodes.

A node is a triplet (S, L, H) acting on n_ports input/output channels and
n_modes internal bosonic modes:

* ``S`` -- n_ports x n_ports unitary scattering matrix (scalar entries),
* ``L`` -- n_ports x n_modes coupling coefficients; row i gives the
  Lindblad operator L_i = sum_j L[i, j] a_j, in sqrt(rad/s),
* ``H`` -- n_modes x n_modes Hermitian coefficients of the quadratic
  Hamiltonian H_op = sum_jk H[j, k] a_j^dag a_k (hbar = 1, rad/s).

Restricting to this linear passive family keeps concatenation, the series
product and feedback elimination exact matrix algebra; no operator
symbolics are needed.  Port indices in the public API are 1-based, matching
the usual "output 1", "input 2" bookkeeping of network diagrams.

:func:`tunable_coupling_loop` builds the cavity/phase-shifter/mirror loop
of the reconfigurable phonon memory by composing these primitives;
:func:`tunable_coupling_closed_form` states the same composite directly, so
the two routes can be checked against each other.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PortMismatch, SingularLoop

__all__ = [
    "SLHTriplet",
    "MasterEqCoeffs",
    "cavity_node",
    "phase_node",
    "trivial_node",
    "concatenate",
    "series",
    "feedback",
    "master_eq_coeffs",
    "effective_rate",
    "tunable_coupling_loop",
    "tunable_coupling_closed_form",
    "run_network",
]

_UNITARY_TOL = 1e-8


@dataclass(frozen=True)
class SLHTriplet:
    """Immutable (S, L, H) description of a linear passive network node."""

    S: np.ndarray
    L: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        S = np.atleast_2d(np.asarray(self.S, dtype=complex))
        n = S.shape[0]
        if S.shape != (n, n):
            raise DomainError(f"scattering matrix must be square, got {S.shape}")
        L = np.asarray(self.L, dtype=complex).reshape(n, -1)
        m = L.shape[1]
        H = np.asarray(self.H, dtype=complex).reshape(m, m)
        if np.max(np.abs(S @ S.conj().T - np.eye(n))) > _UNITARY_TOL:
            raise DomainError("scattering matrix is not unitary")
        if m and np.max(np.abs(H - H.conj().T)) > _UNITARY_TOL:
            raise DomainError("Hamiltonian matrix is not Hermitian")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "H", H)

    @property
    def n_ports(self) -> int:
        return self.S.shape[0]

    @property
    def n_modes(self) -> int:
        return self.L.shape[1]


@dataclass(frozen=True)
class MasterEqCoeffs:
    """Coefficient matrices of dA/dt = drift . A + input_coupling . A_in."""

    drift: np.ndarray           # n_modes x n_modes, rad/s
    input_coupling: np.ndarray  # n_modes x n_ports, sqrt(rad/s)


def cavity_node(kappa_e: float, kappa_i: float, detuning: float = 0.0) -> SLHTriplet:
    """Two-sided cavity with per-port rate kappa_e, loss port kappa_i (rad/s).

    Ports: 1 = left in / right out, 2 = right in / left out, 3 = intrinsic
    loss.  `detuning` is the single-mode Hamiltonian coefficient (rad/s); in
    the rotating frame the bare cavity has detuning 0.
    """
    if kappa_e < 0.0 or kappa_i < 0.0:
        raise DomainError("coupling rates must be non-negative")
    L = np.array([[math.sqrt(kappa_e)], [math.sqrt(kappa_e)], [math.sqrt(kappa_i)]])
    return SLHTriplet(np.eye(3), L, np.array([[detuning]]))


def phase_node(theta: float) -> SLHTriplet:
    """Single-port, zero-mode phase shifter (e^{i theta}, 0, 0)."""
    return SLHTriplet(np.array([[cmath.exp(1j * theta)]]),
                      np.zeros((1, 0)), np.zeros((0, 0)))


def trivial_node(n: int) -> SLHTriplet:
    """n-port pass-through with no internal modes: (I_n, 0, 0)."""
    if n < 1:
        raise DomainError("port count must be at least 1")
    return SLHTriplet(np.eye(n), np.zeros((n, 0)), np.zeros((0, 0)))


def concatenate(g1: SLHTriplet, g2: SLHTriplet) -> SLHTriplet:
    """Parallel composition: block-diagonal S, stacked L, block-sum H."""
    p1, p2 = g1.n_ports, g2.n_ports
    m1, m2 = g1.n_modes, g2.n_modes
    S = np.zeros((p1 + p2, p1 + p2), dtype=complex)
    S[:p1, :p1] = g1.S
    S[p1:, p1:] = g2.S
    L = np.zeros((p1 + p2, m1 + m2), dtype=complex)
    L[:p1, :m1] = g1.L
    L[p1:, m1:] = g2.L
    H = np.zeros((m1 + m2, m1 + m2), dtype=complex)
    H[:m1, :m1] = g1.H
    H[m1:, m1:] = g2.H
    return SLHTriplet(S, L, H)


def series(g2: SLHTriplet, g1: SLHTriplet) -> SLHTriplet:
    """Series product g2 <| g1: every output of g1 feeds the same input of g2.

    Modes of the composite are ordered [g1 modes, g2 modes].
    """
    if g1.n_ports != g2.n_ports:
        raise PortMismatch(f"series needs equal port counts, got {g1.n_ports} and {g2.n_ports}")
    m1, m2 = g1.n_modes, g2.n_modes
    S = g2.S @ g1.S
    L = np.hstack([g2.S @ g1.L, g2.L])
    H = np.zeros((m1 + m2, m1 + m2), dtype=complex)
    H[:m1, :m1] = g1.H
    H[m1:, m1:] = g2.H
    # interaction picked up by routing g1's output through g2: Im(L2^dag S2 L1)
    x = np.zeros((m1 + m2, m1 + m2), dtype=complex)
    x[m1:, :m1] = g2.L.conj().T @ g2.S @ g1.L
    H += (x - x.conj().T) / 2j
    return SLHTriplet(S, L, H)


def feedback(g: SLHTriplet, out_port: int, in_port: int) -> SLHTriplet:
    """Close the loop from `out_port` into `in_port` (1-based, distinct).

    The eliminated channel must not form a unit-gain algebraic loop:
    1 - S[out_port, in_port] has to be invertible.
    """
    n = g.n_ports
    if not (1 <= out_port <= n and 1 <= in_port <= n):
        raise DomainError(f"port indices must lie in 1..{n}")
    if out_port == in_port:
        raise DomainError("feedback requires distinct output and input ports")
    x = out_port - 1
    y = in_port - 1
    gain = g.S[x, y]
    if abs(1.0 - gain) < 1e-12:
        raise SingularLoop(f"unit-gain loop: S[{out_port},{in_port}] = {gain:.6g}")
    keep_out = [i for i in range(n) if i != x]
    keep_in = [j for j in range(n) if j != y]
    inv = 1.0 / (1.0 - gain)
    S = g.S[np.ix_(keep_out, keep_in)] + inv * np.outer(g.S[keep_out, y], g.S[x, keep_in])
    L = g.L[keep_out, :] + inv * np.outer(g.S[keep_out, y], g.L[x, :])
    xmat = inv * np.outer(g.L.conj().T @ g.S[:, y], g.L[x, :])
    H = g.H + (xmat - xmat.conj().T) / 2j
    return SLHTriplet(S, L, H)


def master_eq_coeffs(g: SLHTriplet) -> MasterEqCoeffs:
    """Heisenberg-picture coefficients for the mode amplitudes of a triplet.

    dA/dt = (-iH - L^dag L / 2) A - L^dag S A_in, with the input-output
    relation A_out = S A_in + L A.
    """
    drift = -1j * g.H - 0.5 * g.L.conj().T @ g.L
    input_coupling = -g.L.conj().T @ g.S
    return MasterEqCoeffs(drift=drift, input_coupling=input_coupling)


def effective_rate(theta: float, kappa_e: float) -> float:
    """Raw output power rate 2 kappa_e (1 + cos theta) of the closed loop (rad/s)."""
    if kappa_e < 0.0:
        raise DomainError("kappa_e must be non-negative")
    return 2.0 * kappa_e * (1.0 + math.cos(theta))


def tunable_coupling_loop(theta: float, kappa_e: float, kappa_i: float,
                          corrected: bool = True) -> SLHTriplet:
    """Compose the cavity + round-trip phase shifter + mirror loop.

    The cavity's rightward output passes a phase shifter twice (total phase
    `theta`) before re-entering from the right; eliminating that connection
    leaves a 2-port system (IO channel, loss channel).  With
    ``corrected=True`` the input/output phase shifters (-theta/2 each) and
    the counter-detuned cavity are included, which cancels both the stray
    input phase and the loop-induced detuning.
    """
    two = trivial_node(2)
    if not corrected:
        g1 = cavity_node(kappa_e, kappa_i, 0.0)
        chain = series(concatenate(phase_node(theta), two), g1)
        return feedback(chain, out_port=1, in_port=2)
    g0 = phase_node(-theta / 2.0)
    g1 = cavity_node(kappa_e, kappa_i, -kappa_e * math.sin(theta))
    g2 = phase_node(theta)
    g3 = phase_node(-theta / 2.0)
    one = trivial_node(1)
    chain = series(g1, concatenate(g0, two))
    chain = series(concatenate(g2, two), chain)
    chain = series(concatenate(one, concatenate(g3, one)), chain)
    return feedback(chain, out_port=1, in_port=2)


def tunable_coupling_closed_form(theta: float, kappa_e: float, kappa_i: float,
                                 corrected: bool = True) -> SLHTriplet:
    """Closed-form composite triplet of the loop, for checking the algebra."""
    ke, ki = math.sqrt(kappa_e), math.sqrt(kappa_i)
    if corrected:
        S = np.eye(2)
        L = np.array([[2.0 * ke * math.cos(theta / 2.0)], [ki]])
        H = np.zeros((1, 1))
    else:
        S = np.diag([cmath.exp(1j * theta), 1.0])
        L = np.array([[ke * (cmath.exp(1j * theta) + 1.0)], [ki]])
        H = np.array([[kappa_e * math.sin(theta)]])
    return SLHTriplet(S, L, H)


# --- JSON network description ------------------------------------------------
#
# {"nodes": [{"name": "g1", "kind": "cavity",
#             "params": {"kappa_e_hz": 3e5, "kappa_i_hz": 1.0, "detuning_hz": 0}},
#            {"name": "ph", "kind": "phase", "params": {"theta_rad": 1.2}},
#            {"name": "t2", "kind": "trivial", "params": {"n": 2}}],
#  "script": [{"op": "concat", "args": ["ph", "t2"], "name": "a"},
#             {"op": "series", "args": ["a", "g1"], "name": "b"},
#             {"op": "feedback", "args": ["b", 1, 2], "name": "out"}]}
#
# Rates are entered as ordinary frequencies in Hz and multiplied by 2*pi
# here; feedback ports are 1-based.  With an empty script the single
# declared node is returned unchanged.

def _build_node(kind: str, params: dict) -> SLHTriplet:
    if kind == "cavity":
        return cavity_node(2.0 * math.pi * float(params.get("kappa_e_hz", 0.0)),
                           2.0 * math.pi * float(params.get("kappa_i_hz", 0.0)),
                           2.0 * math.pi * float(params.get("detuning_hz", 0.0)))
    if kind == "phase":
        return phase_node(float(params.get("theta_rad", 0.0)))
    if kind == "trivial":
        return trivial_node(int(params.get("n", 1)))
    raise DomainError(f"unknown node kind {kind!r}")


def run_network(doc: dict) -> SLHTriplet:
    """Build nodes and run the composition script of a network description."""
    registry: dict[str, SLHTriplet] = {}
    nodes = doc.get("nodes", [])
    if not nodes:
        raise DomainError("network description declares no nodes")
    for spec in nodes:
        name = spec.get("name")
        if not name or name in registry:
            raise DomainError(f"node needs a unique name, got {name!r}")
        registry[name] = _build_node(spec.get("kind", ""), spec.get("params", {}))
    last = registry[nodes[-1]["name"]]
    for step in doc.get("script", []):
        op = step.get("op")
        args = step.get("args", [])
        if op == "concat":
            result = concatenate(registry[args[0]], registry[args[1]])
        elif op == "series":
            result = series(registry[args[0]], registry[args[1]])
        elif op == "feedback":
            result = feedback(registry[args[0]], int(args[1]), int(args[2]))
        else:
            raise DomainError(f"unknown script op {op!r}")
        name = step.get("name")
        if name:
            registry[name] = result
        last = result
    return last

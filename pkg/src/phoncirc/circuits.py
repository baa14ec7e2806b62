"""Mach-Zehnder algebra and triangular mesh synthesis for N-mode circuits.

The elementary 2x2 block is

    U(theta, phi) = i [[e^{i phi/2} sin(theta/2),  e^{i phi/2} cos(theta/2)],
                       [e^{-i phi/2} cos(theta/2), -e^{-i phi/2} sin(theta/2)]]

with `theta` the internal differential phase (theta = pi is the bar state,
theta = 0 the full cross) and `phi` the external differential phase.  The
same matrix falls out of composing two 50:50 couplers with differential
phase pairs between and after them (:func:`mzi_from_primitives`), with no
leftover global phase.

:func:`reck_decompose` factors an N x N unitary into a phase screen on the
inputs followed by a triangular mesh of N(N-1)/2 such blocks on adjacent
ports; :func:`mesh_apply` runs a vector through a plan.  Plans serialize to
JSON with 0-based top-port indices.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError, NotUnitary, OutOfRange

__all__ = [
    "mzi_unitary",
    "beam_splitter",
    "mzi_from_primitives",
    "switch_output_powers",
    "MZISetting",
    "MeshPlan",
    "reck_decompose",
    "mesh_apply",
    "haar_unitary",
    "CalibrationCurve",
    "phase_from_voltage",
    "mirror_state",
]

_UNITARY_TOL = 1e-10


def mzi_unitary(theta: float, phi: float) -> np.ndarray:
    """SU(2)-style transfer matrix of one Mach-Zehnder element."""
    s, c = math.sin(theta / 2.0), math.cos(theta / 2.0)
    ep = cmath.exp(0.5j * phi)
    return 1j * np.array([[ep * s, ep * c],
                          [c / ep, -s / ep]])


def beam_splitter() -> np.ndarray:
    """50:50 directional coupler: b_{1,2} = (a_{1,2} + i a_{2,1}) / sqrt(2)."""
    return np.array([[1.0, 1j], [1j, 1.0]]) / math.sqrt(2.0)


def mzi_from_primitives(theta: float, phi: float) -> np.ndarray:
    """Build the element from couplers and differential phase pairs.

    Signal order: splitter, internal pair diag(e^{i theta/2}, e^{-i theta/2}),
    combiner, external pair.  Equals :func:`mzi_unitary` exactly.
    """
    b = beam_splitter()
    internal = np.diag([cmath.exp(0.5j * theta), cmath.exp(-0.5j * theta)])
    external = np.diag([cmath.exp(0.5j * phi), cmath.exp(-0.5j * phi)])
    return external @ b @ internal @ b


def switch_output_powers(theta: float) -> tuple[float, float]:
    """Output powers (1 +/- sin theta)/2 of the switch fed on one port.

    `theta` is the differential bias measured from the balanced 50:50
    operating point (a pi/2 offset from the internal phase of
    :func:`mzi_unitary`, where the same input splits as (1 -/+ cos)/2).
    """
    u = mzi_unitary(theta + math.pi / 2.0, 0.0)
    return abs(u[0, 0]) ** 2, abs(u[1, 0]) ** 2


@dataclass(frozen=True)
class MZISetting:
    """One mesh element: ports (top, top+1) with phases (theta, phi)."""

    top: int
    theta: float
    phi: float

    @property
    def target_ports(self) -> tuple[int, int]:
        return (self.top, self.top + 1)


@dataclass(frozen=True)
class MeshPlan:
    """Input phase screen plus an ordered list of elements (application order)."""

    screen: np.ndarray
    elements: tuple[MZISetting, ...]

    def __post_init__(self):
        screen = np.asarray(self.screen, dtype=float)
        object.__setattr__(self, "screen", screen)
        object.__setattr__(self, "elements", tuple(self.elements))
        n = screen.size
        for e in self.elements:
            if not 0 <= e.top <= n - 2:
                raise DimensionMismatch(f"element at port {e.top} outside 0..{n - 2}")

    @property
    def n_modes(self) -> int:
        return self.screen.size

    def matrix(self) -> np.ndarray:
        """Dense unitary realized by the plan."""
        return mesh_apply(self, np.eye(self.n_modes, dtype=complex))

    def to_json(self) -> str:
        return json.dumps({
            "screen": self.screen.tolist(),
            "elements": [{"i": e.top, "theta": e.theta, "phi": e.phi}
                         for e in self.elements],
        })

    @classmethod
    def from_json(cls, text: str) -> "MeshPlan":
        data = json.loads(text)
        elements = [MZISetting(int(e["i"]), float(e["theta"]), float(e["phi"]))
                    for e in data["elements"]]
        return cls(np.asarray(data["screen"], dtype=float), tuple(elements))


def _wrap_phase(phi: float) -> float:
    """Wrap to (-pi, pi]."""
    return cmath.phase(cmath.exp(1j * phi))


def reck_decompose(u) -> MeshPlan:
    """Factor a unitary as (triangular mesh) o (input phase screen).

    Column by column, bottom up, each subdiagonal entry is nulled by the
    inverse of an element acting on adjacent rows; what remains is the
    diagonal phase screen.  theta is canonical in [0, pi], phi in (-pi, pi].
    A pivot whose target is already zero gets the transparent bar setting
    (theta = pi, phi = 0).
    """
    u = np.asarray(u, dtype=complex)
    n = u.shape[0]
    if u.ndim != 2 or u.shape != (n, n):
        raise DimensionMismatch(f"expected a square matrix, got shape {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(n))) >= _UNITARY_TOL:
        raise NotUnitary("input matrix fails the unitarity check at 1e-10")
    work = u.copy()
    rotations: list[MZISetting] = []
    for col in range(n - 1):
        for row in range(n - 1, col, -1):
            a = work[row - 1, col]
            b = work[row, col]
            if abs(b) < 1e-14:
                theta, phi = math.pi, 0.0
            elif abs(a) < 1e-14:
                theta, phi = 0.0, 0.0
            else:
                phi = _wrap_phase(cmath.phase(a) - cmath.phase(b))
                theta = 2.0 * math.atan2(abs(a), abs(b))
            g = mzi_unitary(theta, phi).conj().T
            work[row - 1:row + 1, :] = g @ work[row - 1:row + 1, :]
            rotations.append(MZISetting(row - 1, theta, phi))
    screen = np.angle(np.diagonal(work))
    # the eliminations satisfy G_K ... G_1 U = D, so U = T_1 ... T_K D and the
    # mesh applies T_K first; reverse into application order
    return MeshPlan(screen, tuple(reversed(rotations)))


def mesh_apply(plan: MeshPlan, x) -> np.ndarray:
    """Send a vector (or matrix of columns) through screen and elements."""
    x = np.asarray(x, dtype=complex)
    if x.shape[0] != plan.n_modes:
        raise DimensionMismatch(
            f"input has {x.shape[0]} modes, plan expects {plan.n_modes}")
    y = (np.exp(1j * plan.screen)[:, None] * x) if x.ndim == 2 else np.exp(1j * plan.screen) * x
    for e in plan.elements:
        block = mzi_unitary(e.theta, e.phi)
        y[e.top:e.top + 2] = block @ y[e.top:e.top + 2]
    return y


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


@dataclass(frozen=True)
class CalibrationCurve:
    """Measured (voltage, band shift) or (voltage, phase) table.

    `kind` is "delta_f" (values in Hz) or "phase" (values in rad).
    Voltages must be strictly increasing; queries interpolate linearly and
    never extrapolate.
    """

    voltages: np.ndarray
    values: np.ndarray
    kind: str = "delta_f"

    def __post_init__(self):
        v = np.asarray(self.voltages, dtype=float)
        y = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.shape != y.shape or v.size < 2:
            raise DomainError("calibration needs matching 1-d arrays with >= 2 points")
        if np.any(np.diff(v) <= 0.0):
            raise DomainError("calibration voltages must be strictly increasing")
        if self.kind not in ("delta_f", "phase"):
            raise DomainError(f"kind must be 'delta_f' or 'phase', got {self.kind!r}")
        object.__setattr__(self, "voltages", v)
        object.__setattr__(self, "values", y)

    @classmethod
    def from_csv(cls, path) -> "CalibrationCurve":
        """Read "voltage_v,delta_f_hz" or "voltage_v,phase_rad" CSV."""
        with open(path) as fh:
            header = fh.readline().strip().lower()
            rows = np.loadtxt(fh, delimiter=",", ndmin=2)
        if header == "voltage_v,delta_f_hz":
            kind = "delta_f"
        elif header == "voltage_v,phase_rad":
            kind = "phase"
        else:
            raise DomainError(f"unrecognized calibration header {header!r}")
        return cls(rows[:, 0], rows[:, 1], kind)

    def sample(self, v: float) -> float:
        v = float(v)
        if v < self.voltages[0] or v > self.voltages[-1]:
            raise OutOfRange(
                f"{v} V outside calibration range [{self.voltages[0]}, {self.voltages[-1]}]")
        return float(np.interp(v, self.voltages, self.values))


def phase_from_voltage(cal: CalibrationCurve, v: float, length_periods: int,
                       v_g: float, pitch: float) -> float:
    """Phase shift (rad) of a `length_periods`-long shifter at bias `v`.

    Band-shift tables are converted with the forward-positive sign rule of
    :func:`phoncirc.elasticity.phase_accumulation`; phase tables are
    interpolated directly.
    """
    value = cal.sample(v)
    if cal.kind == "phase":
        return value
    from .elasticity import phase_accumulation
    return phase_accumulation(value, v_g, length_periods * pitch)


def mirror_state(delta_f: float, band_edge_offset: float) -> str:
    """Classify a biased waveguide as "propagating" or "reflecting".

    `band_edge_offset` (> 0, Hz) is how far the band edge at k = pi/a sits
    above the operating frequency.  Shifting the band down by at least the
    offset (delta_f <= -offset) pushes the operating point into the gap.
    """
    if band_edge_offset <= 0.0:
        raise DomainError("band edge offset must be positive")
    return "reflecting" if delta_f <= -band_edge_offset else "propagating"

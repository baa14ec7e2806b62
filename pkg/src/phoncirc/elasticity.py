"""Finite-strain elasticity and phase-shifter response for diamond-cubic silicon.

Strain vectors use Voigt order (xx, yy, zz, yz, xz, xy) with engineering
shears: s4 = 2*s_yz, s5 = 2*s_xz, s6 = 2*s_xy.  With that convention the
quadratic energy is W2 = (1/2) s . C . s for the standard cubic stiffness
matrix, and the strain-dependent stiffness returned by
:func:`phonoelastic_matrix` satisfies T = c~(s) . s = dW/ds exactly for
W = W2 + W3 (checked by the gradient-consistency tests).

Moduli are stored in Pa.  The bundled default set :data:`SILICON` covers
the second- and third-order constants of Si.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, fields

import numpy as np

from .errors import DomainError, NonPhysicalDeformation

__all__ = [
    "CubicModuli",
    "SILICON",
    "DeformationSummary",
    "green_lagrange_strain",
    "strain_energy",
    "phonoelastic_matrix",
    "strain_110_to_100",
    "bond_matrix",
    "bond_rotate",
    "deformation_summary",
    "path_dilatation",
    "phase_accumulation",
    "pi_shift_length",
]


@dataclass(frozen=True)
class CubicModuli:
    """Second- and third-order elastic moduli of a cubic (m-3m) crystal, in Pa."""

    c11: float
    c12: float
    c44: float
    c111: float
    c112: float
    c123: float
    c144: float
    c166: float
    c456: float

    def __post_init__(self):
        if not (self.c11 > 0 and self.c44 > 0):
            raise DomainError("c11 and c44 must be positive")
        if not self.c11 > abs(self.c12):
            raise DomainError("elastic stability requires c11 > |c12|")

    @classmethod
    def from_json(cls, path, base: "CubicModuli | None" = None) -> "CubicModuli":
        """Load moduli from a JSON object; missing keys fall back to `base`.

        The file maps any subset of c11..c456 to values in Pa.  `base`
        defaults to :data:`SILICON`.
        """
        with open(path) as fh:
            data = json.load(fh)
        return cls.from_dict(data, base=base)

    @classmethod
    def from_dict(cls, data: dict, base: "CubicModuli | None" = None) -> "CubicModuli":
        base = SILICON if base is None else base
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise DomainError(f"unknown moduli keys: {sorted(unknown)}")
        merged = {name: float(data.get(name, getattr(base, name))) for name in names}
        return cls(**merged)

    def stiffness_matrix(self) -> np.ndarray:
        """Zero-strain cubic stiffness matrix (6x6, Pa)."""
        c = np.zeros((6, 6))
        c[0, 0] = c[1, 1] = c[2, 2] = self.c11
        c[0, 1] = c[0, 2] = c[1, 2] = self.c12
        c[1, 0] = c[2, 0] = c[2, 1] = self.c12
        c[3, 3] = c[4, 4] = c[5, 5] = self.c44
        return c


#: Si moduli (Pa): c11, c12, c44 and the six independent third-order constants.
SILICON = CubicModuli(
    c11=165.64e9,
    c12=63.94e9,
    c44=79.51e9,
    c111=-795e9,
    c112=-445e9,
    c123=-75e9,
    c144=15e9,
    c166=-310e9,
    c456=-86e9,
)


@dataclass(frozen=True)
class DeformationSummary:
    """Jacobian of a deformation and the matching inverse density change."""

    jacobian: float
    density_ratio: float  # rho_0 / rho, equal to the Jacobian


def _as_strain(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s.shape != (6,):
        raise DomainError(f"strain must be a 6-vector, got shape {s.shape}")
    if not np.all(np.isfinite(s)):
        raise DomainError("strain components must be finite")
    if np.max(np.abs(s)) >= 1.0:
        warnings.warn("strain component at or beyond unity; cubic energy expansion is suspect",
                      stacklevel=3)
    return s


def _as_gradient(g) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.shape != (3, 3):
        raise DomainError(f"displacement gradient must be 3x3, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise DomainError("displacement gradient must be finite")
    return g


def green_lagrange_strain(g) -> np.ndarray:
    """Exact (non-linearized) strain of a displacement gradient, packed to Voigt.

    g[i, j] = du_i/dr_j.  Returns the 6-vector with engineering shears.
    """
    g = _as_gradient(g)
    e = 0.5 * (g + g.T + g.T @ g)
    return np.array([e[0, 0], e[1, 1], e[2, 2],
                     2.0 * e[1, 2], 2.0 * e[0, 2], 2.0 * e[0, 1]])


def strain_energy(s, moduli: CubicModuli = SILICON, order: str = "third") -> float:
    """Strain energy density (J/m^3) at second or third order in the strain."""
    if order not in ("second", "third"):
        raise DomainError(f"order must be 'second' or 'third', got {order!r}")
    s1, s2, s3, s4, s5, s6 = _as_strain(s)
    c = moduli
    w = (0.5 * c.c11 * (s1**2 + s2**2 + s3**2)
         + c.c12 * (s1 * s2 + s1 * s3 + s2 * s3)
         + 0.5 * c.c44 * (s4**2 + s5**2 + s6**2))
    if order == "third":
        w += (c.c111 * (s1**3 + s2**3 + s3**3) / 6.0
              + 0.5 * c.c112 * (s1**2 * s2 + s1**2 * s3 + s1 * s2**2
                                + s1 * s3**2 + s2**2 * s3 + s2 * s3**2)
              + 0.5 * c.c144 * (s1 * s4**2 + s2 * s5**2 + s3 * s6**2)
              + 0.5 * c.c166 * (s1 * s5**2 + s1 * s6**2 + s2 * s4**2
                                + s2 * s6**2 + s3 * s4**2 + s3 * s5**2)
              + c.c123 * s1 * s2 * s3
              + c.c456 * s4 * s5 * s6)
    return float(w)


def phonoelastic_matrix(s, moduli: CubicModuli = SILICON) -> np.ndarray:
    """Strain-dependent stiffness c~(s) in the [100] frame (6x6 symmetric, Pa).

    At s = 0 this is the conventional cubic stiffness matrix; the linear-in-s
    corrections come from the third-order moduli and satisfy c~(s) . s = dW/ds.
    """
    s1, s2, s3, s4, s5, s6 = _as_strain(s)
    c = moduli
    m = np.zeros((6, 6))
    m[0, 0] = c.c11 + 0.5 * c.c111 * s1 + 0.5 * c.c112 * (s2 + s3)
    m[0, 1] = c.c12 + 0.5 * c.c112 * (s1 + s2) + 0.5 * c.c123 * s3
    m[0, 2] = c.c12 + 0.5 * c.c112 * (s1 + s3) + 0.5 * c.c123 * s2
    m[0, 3] = 0.5 * c.c144 * s4
    m[0, 4] = 0.5 * c.c166 * s5
    m[0, 5] = 0.5 * c.c166 * s6
    m[1, 1] = c.c11 + 0.5 * c.c111 * s2 + 0.5 * c.c112 * (s1 + s3)
    m[1, 2] = c.c12 + 0.5 * c.c112 * (s2 + s3) + 0.5 * c.c123 * s1
    m[1, 3] = 0.5 * c.c166 * s4
    m[1, 4] = 0.5 * c.c144 * s5
    m[1, 5] = 0.5 * c.c166 * s6
    m[2, 2] = c.c11 + 0.5 * c.c111 * s3 + 0.5 * c.c112 * (s1 + s2)
    m[2, 3] = 0.5 * c.c166 * s4
    m[2, 4] = 0.5 * c.c166 * s5
    m[2, 5] = 0.5 * c.c144 * s6
    m[3, 3] = c.c44 + 0.5 * c.c144 * s1 + 0.5 * c.c166 * (s2 + s3)
    m[3, 4] = 0.5 * c.c456 * s6
    m[3, 5] = 0.5 * c.c456 * s5
    m[4, 4] = c.c44 + 0.5 * c.c144 * s2 + 0.5 * c.c166 * (s1 + s3)
    m[4, 5] = 0.5 * c.c456 * s4
    m[5, 5] = c.c44 + 0.5 * c.c144 * s3 + 0.5 * c.c166 * (s1 + s2)
    # fill the lower triangle; the matrix is symmetric by construction
    return m + np.triu(m, 1).T


def strain_110_to_100(s110) -> np.ndarray:
    """Re-express [110]-frame tensor strain components as [100] Voigt strains.

    Input order is (s'_xx, s'_yy, s'_zz, s'_yz, s'_xz, s'_xy) with *tensor*
    shears (no factor 2); the output carries engineering shears, ready for
    :func:`strain_energy` / :func:`phonoelastic_matrix`.
    """
    s = np.asarray(s110, dtype=float)
    if s.shape != (6,):
        raise DomainError(f"expected 6 tensor components, got shape {s.shape}")
    sxx, syy, szz, syz, sxz, sxy = s
    r2 = math.sqrt(2.0)
    return np.array([
        0.5 * sxx - sxy + 0.5 * syy,
        0.5 * sxx + sxy + 0.5 * syy,
        szz,
        r2 * (sxz + syz),
        r2 * (sxz - syz),
        sxx - syy,
    ])


def bond_matrix(xi: float) -> np.ndarray:
    """Bond transformation matrix for a rotation by `xi` about the z ([001]) axis."""
    c, s = math.cos(xi), math.sin(xi)
    s2 = math.sin(2.0 * xi)
    c2 = math.cos(2.0 * xi)
    return np.array([
        [c * c, s * s, 0.0, 0.0, 0.0, s2],
        [s * s, c * c, 0.0, 0.0, 0.0, -s2],
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, c, -s, 0.0],
        [0.0, 0.0, 0.0, s, c, 0.0],
        [-0.5 * s2, 0.5 * s2, 0.0, 0.0, 0.0, c2],
    ])


def bond_rotate(m, xi: float) -> np.ndarray:
    """Rotate a 6x6 Voigt stiffness-like matrix by `xi` about [001]: M m M^T."""
    m = np.asarray(m, dtype=float)
    if m.shape != (6, 6):
        raise DomainError(f"expected a 6x6 matrix, got shape {m.shape}")
    b = bond_matrix(xi)
    return b @ m @ b.T


def deformation_summary(g) -> DeformationSummary:
    """Jacobian det(I + g) of the deformation and the density ratio rho0/rho."""
    g = _as_gradient(g)
    j = float(np.linalg.det(np.eye(3) + g))
    if j <= 0.0:
        raise NonPhysicalDeformation(f"det(I + g) = {j:.3g} <= 0 (inverted element)")
    return DeformationSummary(jacobian=j, density_ratio=j)


def path_dilatation(du: float, dw: float, pitch: float) -> float:
    """Per-period path-length change of a waveguide axis displaced by (du, dw).

    `du` is the axial and `dw` the out-of-plane displacement increment over
    one lattice period of length `pitch` (all in meters).
    """
    if pitch <= 0.0:
        raise DomainError("lattice pitch must be positive")
    return math.hypot(du + pitch, dw) - pitch


def phase_accumulation(delta_f: float, v_g: float, length: float,
                       k: float = 0.0, delta_length: float = 0.0) -> float:
    """Phase shift (rad) from a band shift delta_f plus a path-length change.

    A negative frequency shift lowers the band, raising the propagation
    constant at fixed operating frequency, so negative delta_f gives a
    positive (forward) phase shift: dphi = -(2 pi delta_f / v_g) L + k dL.
    """
    if v_g <= 0.0:
        raise DomainError("group velocity must be positive")
    return -2.0 * math.pi * delta_f / v_g * length + k * delta_length


def pi_shift_length(delta_f: float, v_g: float) -> float:
    """Waveguide length (m) needed for a +/- pi phase shift at band shift delta_f."""
    if v_g <= 0.0:
        raise DomainError("group velocity must be positive")
    if delta_f == 0.0:
        raise DomainError("delta_f must be nonzero")
    return v_g / (2.0 * abs(delta_f))

"""Physical parameters, CGS-Gaussian constants and electron-gas kinematics.

Everything is in CGS-Gaussian units: lengths in cm, masses in g, charge in
statC, magnetic fields in G. Frequencies are angular (rad/s) internally; the
config/CLI layer converts from Hz.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import SingularInputError, ValidationError

HBAR = 1.054571817e-27      # erg s
C_LIGHT = 2.99792458e10     # cm / s
E_CHARGE = 4.80320471e-10   # statC
M_ELECTRON = 9.1093837015e-28  # g

PROJECTIONS = ("spin-half", "nv-two-level")


@dataclass(frozen=True)
class PhysicalParams:
    """Electron gas below a sheet of two-level magnetic dipoles.

    Parameters
    ----------
    v_f : float
        Fermi velocity (cm/s).
    mass : float
        Effective electron mass (g).
    d : float
        Height of the dipoles above the conductor (cm), ``d >= 0``.
    delta : float
        Dipole level spacing as an angular frequency (rad/s).
    gamma : float
        Gyromagnetic ratio magnitude (rad / (s G)).
    projection : {"spin-half", "nv-two-level"}
        ``nv-two-level`` enhances the transverse coupling by sqrt(2), which
        doubles every decay rate.
    """

    v_f: float
    mass: float
    d: float
    delta: float
    gamma: float
    projection: str = "spin-half"

    def __post_init__(self):
        for name in ("v_f", "mass", "delta", "gamma"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be positive and finite, got {value!r}", field=name)
        if not (math.isfinite(self.d) and self.d >= 0):
            raise ValidationError(f"d must be non-negative and finite, got {self.d!r}", field="d")
        if self.projection not in PROJECTIONS:
            raise ValidationError(
                f"projection must be one of {PROJECTIONS}, got {self.projection!r}", field="projection"
            )

    @property
    def k_f(self):
        return self.mass * self.v_f / HBAR

    @property
    def lambda_f(self):
        return 1.0 / self.k_f

    @property
    def e_f(self):
        return 0.5 * HBAR * self.k_f * self.v_f

    @property
    def rho_e(self):
        """2D electron density k_F^2 / 2 pi (both spins)."""
        return self.k_f**2 / (2 * math.pi)

    @property
    def decay_gyro(self):
        """Gyromagnetic ratio entering decay/excitation rates."""
        if self.projection == "nv-two-level":
            return math.sqrt(2.0) * self.gamma
        return self.gamma

    def replace(self, **changes):
        kwargs = dict(v_f=self.v_f, mass=self.mass, d=self.d, delta=self.delta,
                      gamma=self.gamma, projection=self.projection)
        kwargs.update(changes)
        return PhysicalParams(**kwargs)

    def as_dict(self):
        return {"v_f_cm_s": self.v_f, "m_g": self.mass, "d_cm": self.d,
                "delta_rad_s": self.delta, "gamma_rad_s_per_g": self.gamma,
                "projection": self.projection}


@dataclass(frozen=True)
class DerivedQuantities:
    k_f: float
    lambda_f: float
    e_f: float
    rho_e: float


def derive(params):
    """Fermi wave vector, length, energy and 2D density of ``params``."""
    return DerivedQuantities(k_f=params.k_f, lambda_f=params.lambda_f, e_f=params.e_f, rho_e=params.rho_e)


def q_omega(params, omega):
    """Wave vector sqrt(2 m omega / hbar) of a free electron at energy hbar*omega."""
    return np.sqrt(2.0 * params.mass * np.asarray(omega, dtype=float) / HBAR)


def resonance_energy(params, q, omega):
    """Lowest initial-state energy able to absorb (hbar q, hbar omega).

    Returns ``(E, q_omega)`` with ``E = hbar^2 (q_omega^2 - q^2)^2 / (8 m q^2)``.
    """
    q = np.asarray(q, dtype=float)
    if np.any(q <= 0):
        raise SingularInputError("resonance energy is singular at q <= 0")
    qw2 = 2.0 * params.mass * np.asarray(omega, dtype=float) / HBAR
    energy = HBAR**2 * (qw2 - q**2) ** 2 / (8.0 * params.mass * q**2)
    return energy, np.sqrt(np.abs(qw2))


def scaled_momenta(params, q, omega):
    """Dimensionless ``(x_minus, x_plus)`` = ((q_w^2 -+ q^2) / (2 k_F q)).

    ``1 - x_minus^2 = (E_F - E)/E_F`` and ``1 - x_plus^2 = (E_F - hbar w - E)/E_F``.
    ``omega`` may be negative.
    """
    q = np.asarray(q, dtype=float)
    if np.any(q <= 0):
        raise SingularInputError("q must be positive")
    kf = params.k_f
    nu = np.asarray(omega, dtype=float) / (params.v_f * q)
    kappa = q / (2.0 * kf)
    return nu - kappa, nu + kappa


def support_interval(params, omega):
    """Wave-vector interval on which particle-hole pairs at ``omega > 0`` exist.

    Returns ``(q_lo, q_hi)`` where ``E(q, omega) < E_F``. Closed-form roots of
    ``|q_w^2 - q^2| = 2 k_F q``.
    """
    if omega <= 0:
        raise ValidationError("support interval requires omega > 0", field="omega")
    kf = params.k_f
    qw2 = 2.0 * params.mass * omega / HBAR
    root = math.sqrt(kf**2 + qw2)
    # q_lo = root - kf, written without cancellation
    return qw2 / (root + kf), root + kf


def blocking_breakpoints(params, omega):
    """Wave vectors where ``E(q, omega) = E_F - hbar omega`` (kinks of the noise).

    Empty when ``hbar omega >= E_F``.
    """
    kf = params.k_f
    qw2 = 2.0 * params.mass * omega / HBAR
    if qw2 >= kf**2:
        return ()
    k_w = math.sqrt(kf**2 - qw2)
    return (qw2 / (kf + k_w), kf + k_w)


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class DipoleEnsemble:
    """N dipoles: in-plane positions (cm) and right-handed triads.

    ``orientations[n]`` holds the rows (x_n, y_n, z_n) in lab coordinates,
    with the conductor normal along the lab z axis.
    """

    positions: np.ndarray
    orientations: np.ndarray = field(default=None)

    def __post_init__(self):
        pos = np.atleast_2d(np.asarray(self.positions, dtype=float))
        if pos.ndim != 2 or pos.shape[1] != 2 or pos.shape[0] < 1:
            raise ValidationError("positions must have shape (N, 2) with N >= 1", field="positions")
        if self.orientations is None:
            tri = np.broadcast_to(np.eye(3), (pos.shape[0], 3, 3)).copy()
        else:
            tri = np.asarray(self.orientations, dtype=float)
        if tri.shape != (pos.shape[0], 3, 3):
            raise ValidationError("orientations must have shape (N, 3, 3)", field="orientations")
        gram = np.einsum("nij,nkj->nik", tri, tri)
        if np.max(np.abs(gram - np.eye(3))) > 1e-12:
            raise ValidationError("orientation triads must be orthonormal", field="orientations")
        if np.any(np.linalg.det(tri) < 0):
            raise ValidationError("orientation triads must be right-handed", field="orientations")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "orientations", tri)

    def __len__(self):
        return self.positions.shape[0]

    @property
    def normal_aligned(self):
        """True when every dipole axis is the conductor normal."""
        return bool(np.allclose(self.orientations[:, 2, :], [0.0, 0.0, 1.0], atol=1e-12))

    @classmethod
    def aligned(cls, positions, axis=(0.0, 0.0, 1.0), x_axis=None):
        """All dipoles share one triad with ``z_n = axis``."""
        z = _unit(axis)
        if x_axis is None:
            trial = np.array([1.0, 0.0, 0.0]) if abs(z[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
            x = _unit(trial - z * (trial @ z))
        else:
            x = _unit(x_axis)
        y = np.cross(z, x)
        pos = np.atleast_2d(np.asarray(positions, dtype=float))
        tri = np.broadcast_to(np.stack([x, y, z]), (pos.shape[0], 3, 3)).copy()
        return cls(pos, tri)

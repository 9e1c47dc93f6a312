"""Magnetic-field noise correlators of a 2D electron gas and of bosonic lines.

The central quantity is the transverse-current (Oersted) correlator

    C^{-+}(w, q) = F e^{-2 q d} (2 e v_F / c)^2 (pi m / hbar) (k_F / q) C(q, w),

with the dimensionless particle-hole factor ``C(q, w)`` evaluated exactly for
an isotropic Fermi circle at zero temperature. All wave vectors are in
cm^-1 and frequencies in rad/s.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import SingularInputError, ValidationError
from .numerics import DEFAULT_SPEC, integrate_panels
from .units import (C_LIGHT, E_CHARGE, HBAR, PhysicalParams, blocking_breakpoints,
                    resonance_energy, support_interval)

D_HAT = np.array([0.0, 0.0, 1.0])
NOISE_KINDS = ("simple-fermion", "transverse-current", "boson-lines")


@dataclass(frozen=True)
class BosonLine:
    """One bosonic mode: frequency, in-plane wave vector, coupling vector, occupation."""

    omega_q: float
    q: tuple
    g: tuple
    n_q: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(float(v) for v in self.q))
        object.__setattr__(self, "g", tuple(complex(v) for v in self.g))
        if len(self.q) != 2 or len(self.g) != 3:
            raise ValidationError("BosonLine needs a 2-vector q and a 3-vector g", field="line")
        if self.n_q < 0:
            raise ValidationError("occupation must be non-negative", field="n_q")

    @property
    def g_plus(self):
        return self.g[0] + 1j * self.g[1]

    @property
    def g_minus(self):
        return self.g[0] - 1j * self.g[1]

    def rotated(self, phi):
        """The mode rotated by ``phi`` about the plane normal."""
        c, s = math.cos(phi), math.sin(phi)
        qx, qy = self.q
        gx, gy, gz = self.g
        return BosonLine(self.omega_q, (c * qx - s * qy, s * qx + c * qy),
                         (c * gx - s * gy, s * gx + c * gy, gz), self.n_q)


@dataclass(frozen=True)
class NoiseModel:
    """Environment description.

    ``coupling`` is the constant matrix element for ``simple-fermion``;
    ``lines`` lists the modes for ``boson-lines``.
    """

    kind: str
    params: PhysicalParams
    coupling: float = None
    lines: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValidationError(f"kind must be one of {NOISE_KINDS}", field="kind")
        if self.kind == "simple-fermion" and self.coupling is None:
            raise ValidationError("simple-fermion model needs a coupling", field="coupling")
        object.__setattr__(self, "lines", tuple(self.lines))


@dataclass(frozen=True)
class OrientationPair:
    """Triads (rows x, y, z in lab coordinates) of two dipoles."""

    triad_n: np.ndarray
    triad_m: np.ndarray

    def __post_init__(self):
        for name in ("triad_n", "triad_m"):
            tri = np.asarray(getattr(self, name), dtype=float)
            if tri.shape != (3, 3) or np.max(np.abs(tri @ tri.T - np.eye(3))) > 1e-12:
                raise ValidationError(f"{name} must be an orthonormal 3x3 triad", field=name)
            object.__setattr__(self, name, tri)


def _require_positive_q(q):
    q = np.asarray(q, dtype=float)
    if np.any(q <= 0):
        raise SingularInputError("the noise spectrum is singular at q <= 0")
    return q


def _pos_sqrt(x):
    return np.sqrt(np.maximum(x, 0.0))


def simple_fermion_noise(model, omega, q):
    """Noise for a constant coupling (no spin factor).

    ``sqrt(2) V^2 m^{3/2} / (pi hbar^2 q) [sqrt(E_F - E) - sqrt(E_F - hbar w - E)]``
    with the second root dropped when its argument is negative and zero when
    ``E > E_F``.
    """
    if model.kind != "simple-fermion":
        raise ValidationError("model kind must be simple-fermion", field="kind")
    p = model.params
    q = _require_positive_q(q)
    omega = np.asarray(omega, dtype=float)
    energy, _ = resonance_energy(p, q, np.abs(omega))
    upper = p.e_f - energy
    lower = upper - HBAR * omega
    value = _pos_sqrt(upper) - _pos_sqrt(lower)
    value = np.where((omega > 0) & (upper > 0), value, 0.0)
    pref = math.sqrt(2.0) * model.coupling**2 * p.mass**1.5 / (math.pi * HBAR**2 * q)
    out = pref * value
    return out if out.ndim else float(out)


def _blocking_factors(params, omega, q):
    """``u = 1 - E/E_F`` and ``v = 1 - (E + hbar w)/E_F`` in factored form.

    Writing both through their roots in q (the support ends and the blocking
    points) keeps full relative accuracy close to each edge, where ``sqrt(u)``
    would otherwise amplify cancellation noise.
    """
    kf = params.k_f
    omega, q = np.broadcast_arrays(np.asarray(omega, dtype=float), np.asarray(q, dtype=float))
    pos = omega > 0
    qw2 = np.where(pos, 2.0 * params.mass * np.where(pos, omega, 0.0) / HBAR, 0.0)
    denom = (2.0 * kf * q) ** 2
    root = np.sqrt(kf**2 + qw2)
    lo = qw2 / (root + kf)
    hi = root + kf
    u = (q - lo) * (q + lo + 2.0 * kf) * (hi - q) * (q + lo) / denom
    disc = kf**2 - qw2
    kw = np.sqrt(np.maximum(disc, 0.0))
    b1 = qw2 / (kf + kw)
    b2 = kf + kw
    v = np.where(disc > 0, (q - b1) * (b2 - q) * (q * q + 2.0 * kf * q + qw2) / denom, -1.0)
    u = np.where(pos, u, -1.0)
    return u, v


def transverse_current_C(params, omega, q, spin_degeneracy=2):
    """Dimensionless particle-hole factor C(q, w) of the transverse current noise.

    ``C = (2/3)[u^{3/2} - (u - w)^{3/2}]`` with ``u = 1 - E/E_F`` and
    ``w = hbar w / E_F``; the second term is dropped once ``u < w`` and the
    result vanishes for ``u <= 0`` or ``w <= 0``. The default includes both
    spin species.
    """
    q = _require_positive_q(q)
    omega = np.asarray(omega, dtype=float)
    u, v = _blocking_factors(params, omega, q)
    w = HBAR * omega / params.e_f
    up = np.maximum(u, 0.0)
    vp = np.maximum(v, 0.0)
    su, sv = np.sqrt(up), np.sqrt(vp)
    # a^{3/2} - b^{3/2} = (a - b)(a + sqrt(ab) + b)/(sqrt a + sqrt b), a - b = w exactly
    with np.errstate(divide="ignore", invalid="ignore"):
        both = w * (up + su * sv + vp) / (su + sv)
    value = np.where(v > 0, both, up**1.5)
    value = np.where(u > 0, value, 0.0)
    out = (2.0 / 3.0) * value * (spin_degeneracy / 2.0)
    return out if out.ndim else float(out)


def oersted_prefactor(params):
    """``(2 e v_F / c)^2 (pi m / hbar) k_F`` in G^2 cm^3 s."""
    return (2.0 * E_CHARGE * params.v_f / C_LIGHT) ** 2 * (math.pi * params.mass / HBAR) * params.k_f


def oersted_noise(params, omega, q, F=1.0, spin_degeneracy=2):
    """Correlator C^{-+}(w, q) (G^2 cm^2 s) of the Oersted field of transverse currents."""
    q = _require_positive_q(q)
    c = transverse_current_C(params, omega, q, spin_degeneracy)
    out = F * np.exp(-2.0 * q * params.d) * oersted_prefactor(params) / q * c
    return out if np.ndim(out) else float(np.real_if_close(out))


def _lab_vectors(q_hat):
    q_hat = np.asarray(q_hat, dtype=float)
    if q_hat.shape[-1] != 2:
        raise ValidationError("q_hat must have a trailing dimension of 2", field="q_hat")
    norm = np.linalg.norm(q_hat, axis=-1, keepdims=True)
    if np.any(norm == 0):
        raise SingularInputError("q_hat must be non-zero")
    q_hat = q_hat / norm
    zeros = np.zeros(q_hat.shape[:-1] + (1,))
    return np.concatenate([q_hat, zeros], axis=-1)


def orientation_factor(pair, q_hat):
    """``F_nm = [(x_n - i y_n).(q + i d)] [(x_m + i y_m).(q - i d)]``."""
    q3 = _lab_vectors(q_hat)
    xn, yn, _ = pair.triad_n
    xm, ym, _ = pair.triad_m
    left = (q3 + 1j * D_HAT) @ (xn - 1j * yn)
    right = (q3 - 1j * D_HAT) @ (xm + 1j * ym)
    return left * right


def orientation_harmonics(pair):
    """Coefficients ``c_m`` (m = -2..2) with ``F(phi) = sum_m c_m e^{i m phi}``."""
    phi = 2.0 * np.pi * np.arange(8) / 8
    samples = orientation_factor(pair, np.stack([np.cos(phi), np.sin(phi)], axis=-1))
    coeff = np.fft.fft(samples) / 8
    return {m: complex(coeff[m % 8]) for m in range(-2, 3)}


def oersted_coupling(params, k, q, origin=(0.0, 0.0)):
    """Matrix element ``V_{k, k+q}`` (Cartesian complex 3-vector, G cm^2).

    ``V = (q_hat + i d_hat)(2 pi e hbar / c m) e^{-q d} (q_perp . k)`` with
    ``q_perp = q_hat x d_hat``. A non-zero ``origin`` multiplies the element by
    ``exp(i q . origin)``.
    """
    k = np.asarray(k, dtype=float)
    q = np.asarray(q, dtype=float)
    qn = float(np.linalg.norm(q))
    if qn == 0:
        raise SingularInputError("coupling is singular at q = 0")
    q_hat = q / qn
    q_perp = np.array([q_hat[1], -q_hat[0]])
    amp = 2.0 * math.pi * E_CHARGE * HBAR / (C_LIGHT * params.mass) * math.exp(-qn * params.d)
    vec = np.array([q_hat[0], q_hat[1], 1j])
    phase = np.exp(1j * float(q @ np.asarray(origin, dtype=float)))
    return vec * amp * float(q_perp @ k) * phase


def boson_line_spectrum(model, omega, window):
    """Lines contributing at ``omega`` within ``window``.

    Returns ``(line, weight)`` pairs: ``2 pi |g|^2 (1 + n)`` for emission
    near ``+w_q`` and ``2 pi |g|^2 n`` for absorption near ``-w_q``.
    """
    if model.kind != "boson-lines":
        raise ValidationError("model kind must be boson-lines", field="kind")
    out = []
    for line in model.lines:
        g2 = float(np.sum(np.abs(line.g) ** 2))
        if abs(omega - line.omega_q) < window:
            out.append((line, 2.0 * math.pi * g2 * (1.0 + line.n_q)))
        if abs(omega + line.omega_q) < window and line.n_q > 0:
            out.append((line, 2.0 * math.pi * g2 * line.n_q))
    return out


def noise_breakpoints(params, omega):
    """Support ends and interior kinks of C^{-+}(w, .)."""
    lo, hi = support_interval(params, omega)
    return lo, hi, tuple(b for b in blocking_breakpoints(params, omega) if lo < b < hi)


def support_edges(params, omega):
    """Initial quadrature edges on the support of C^{-+}(w, .).

    Besides the ends and kinks, edges are graded geometrically away from
    ``q_lo``: the density rises like ``sqrt(q - q_lo)`` over a scale ``q_lo``,
    which is many orders of magnitude narrower than the support when
    ``hbar w << E_F`` and would otherwise hide inside one panel.
    """
    lo, hi, kinks = noise_breakpoints(params, omega)
    n_grade = max(0, int(math.ceil(math.log2((hi - lo) / lo))))
    graded = lo + lo * 2.0 ** np.arange(-6, n_grade)
    edges = np.concatenate([[lo, hi], kinks, graded[graded < hi]])
    return np.unique(edges)


def local_noise_density(params, omega=None, spec=DEFAULT_SPEC, spin_degeneracy=2):
    """``int q dq / 2 pi C^{-+}(w, q)`` (G^2 s) for z-aligned dipoles; default ``w = Delta``."""
    omega = params.delta if omega is None else omega

    def integrand(q):
        return q / (2.0 * math.pi) * oersted_noise(params, omega, q, spin_degeneracy=spin_degeneracy)

    value, _ = integrate_panels(integrand, support_edges(params, omega), spec)
    return value

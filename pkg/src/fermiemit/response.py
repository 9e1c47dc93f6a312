"""Transverse current response of a 2D Fermi gas and the emitted current wave.

Conventions: ``G`` is the retarded transverse current-current response of the
free Fermi gas (erg), the Kubo coefficient ``G / hbar + e^2 rho_e / m`` maps a
vector potential onto the transverse current, and

    chi(rho, phi, w) = (2 pi gamma_e / c) int q dq / 2 pi  K(q rho, phi) e^{-q d} kubo(q, w)

maps the macrospin ``S(w)`` (erg s) onto the in-plane current density
(statA / cm) with rows ``(rho, phi)`` and columns ``(x, y, d)``. Fourier
transforms use ``S(w) = int dt e^{+i w t} S(t)``.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import integrate, interpolate, ndimage, signal, special

from .collective import macrospin_exact
from .errors import ConvergenceError, SingularInputError, ValidationError
from .noise import noise_breakpoints
from .numerics import (DEFAULT_SPEC, bessel_j, fft_forward, integrate_hankel_damped,
                       panel_nodes, richardson)
from .units import C_LIGHT, E_CHARGE, HBAR, M_ELECTRON

MODES = ("exact", "small-q")
PARTS = ("paramagnetic", "diamagnetic", "total")


# --------------------------------------------------------------------------
# the dimensionless response function g(x)

def _t_outside(a):
    """``a - sqrt(a^2 - 1)`` for ``a >= 1`` without cancellation."""
    return 1.0 / (a + np.sqrt((a - 1.0) * (a + 1.0)))


def g_complex(x):
    """``g(x)``: Re = x^3 - 3x/2 - sign(x)(x^2 - 1)^{3/2} Theta(x^2 - 1), Im = (1 - x^2)^{3/2} Theta(1 - x^2)."""
    x = np.asarray(x, dtype=float)
    a = np.abs(x)
    inside = a < 1.0
    with np.errstate(invalid="ignore", divide="ignore"):
        t = _t_outside(np.where(inside, 1.0, a))
        # outside the continuum x^3 - 3x/2 - (x^2 - 1)^{3/2} = t^3/4 - 3t/4
        re_out = np.sign(x) * (0.25 * t**3 - 0.75 * t)
    re = np.where(inside, x**3 - 1.5 * x, re_out)
    im = np.where(inside, np.maximum((1.0 - x) * (1.0 + x), 0.0) ** 1.5, 0.0)
    out = re + 1j * im
    return out if out.ndim else complex(out)


def g_prime(x):
    """Analytic ``dg/dx``; one-sided (from inside the continuum) at ``|x| = 1``."""
    x = np.asarray(x, dtype=float)
    a = np.abs(x)
    inside = a <= 1.0
    t = _t_outside(np.where(inside, 1.0, a))
    root = np.sqrt(np.maximum((1.0 - x) * (1.0 + x), 0.0))
    out = np.where(inside, 3.0 * x**2 - 1.5 - 3j * x * root, 1.5 * t**2 + 0j)
    return out if out.ndim else complex(out)


# --------------------------------------------------------------------------
# current-current response

def _positive_q(q):
    q = np.asarray(q, dtype=float)
    if np.any(q <= 0):
        raise SingularInputError("the response is singular at q <= 0")
    return q


def drude_weight(params):
    """``e^2 rho_e / m``: the diamagnetic Kubo coefficient."""
    return E_CHARGE**2 * params.rho_e / params.mass


def green_exact(params, q, omega):
    """Exact retarded transverse current response ``G(q, w)`` (erg)."""
    q = _positive_q(q)
    omega = np.asarray(omega, dtype=float)
    nu = omega / (params.v_f * q)
    kappa = q / (2.0 * params.k_f)
    pref = drude_weight(params) * 2.0 * HBAR * params.k_f / (3.0 * q)
    out = pref * (g_complex(nu + kappa) - g_complex(nu - kappa))
    return out if np.ndim(out) else complex(out)


def green_smallq(params, q, omega):
    """Small-``q`` form ``(e^2 rho_e / m)(2 hbar / 3) g'(w / v_F q)``."""
    q = _positive_q(q)
    out = drude_weight(params) * (2.0 * HBAR / 3.0) * g_prime(np.asarray(omega, dtype=float) / (params.v_f * q))
    return out if np.ndim(out) else complex(out)


def kubo_coefficient(params, q, omega, mode="exact", part="total"):
    """Kubo coefficient ``G / hbar + e^2 rho_e / m`` (statC^2 / (g cm^2)), part-selectable."""
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {MODES}", field="mode")
    if part not in PARTS:
        raise ValidationError(f"part must be one of {PARTS}", field="part")
    q = _positive_q(q)
    dia = drude_weight(params)
    if part == "diamagnetic":
        out = np.full(np.broadcast(q, np.asarray(omega)).shape, dia, dtype=complex)
        return out if out.ndim else complex(out)
    green = green_exact if mode == "exact" else green_smallq
    para = np.asarray(green(params, q, omega)) / HBAR
    out = para if part == "paramagnetic" else para + dia
    return out if np.ndim(out) else complex(out)


def fdt_noise(params, q, omega):
    """``-(8 pi^2 / c^2) e^{-2 q d} Im G``: the noise implied by the response."""
    q = _positive_q(q)
    return -(8.0 * math.pi**2 / C_LIGHT**2) * np.exp(-2.0 * q * params.d) * np.imag(green_exact(params, q, omega))


# --------------------------------------------------------------------------
# static limit

def landau_chi(params, q0_ratio=0.2, ratio=0.5, levels=6):
    """Orbital susceptibility ``lim_{q->0} -(1/c^2 q^2) kubo(q, 0)`` by Richardson extrapolation.

    Returns ``(value, error_estimate)``.
    """
    kf = params.k_f

    def f(h):
        q = h * kf
        return -float(np.real(kubo_coefficient(params, q, 0.0))) / (C_LIGHT**2 * q**2)

    value, err, diag = richardson(f, q0_ratio, ratio=ratio, levels=levels, order=2)
    if not err <= 1e-6 * abs(value):
        raise ConvergenceError("Landau-limit extrapolation did not settle", estimate=value, error=err,
                               diagnostics={"sequence": diag})
    return value, err


def landau_chi_closed_form(params):
    return -E_CHARGE**2 / (12.0 * math.pi * params.mass * C_LIGHT**2)


def pauli_chi():
    """Free-electron 2D Pauli susceptibility ``e^2 / (4 pi m_e c^2)``."""
    return E_CHARGE**2 / (4.0 * math.pi * M_ELECTRON * C_LIGHT**2)


# --------------------------------------------------------------------------
# real-space kernel and chi

def kernel_K(q_rho, phi):
    """Angular kernel, shape ``(..., 2, 3)``: rows (rho, phi), columns (x, y, d)."""
    x = np.asarray(q_rho, dtype=float)
    phi = np.asarray(phi, dtype=float)
    x, phi = np.broadcast_arrays(x, phi)
    j0, j1, j2 = bessel_j(0, x), bessel_j(1, x), bessel_j(2, x)
    p = 0.5 * (np.asarray(j0) + np.asarray(j2))
    m = 0.5 * (np.asarray(j0) - np.asarray(j2))
    s, c = np.sin(phi), np.cos(phi)
    zero = np.zeros_like(x)
    rows = np.stack([np.stack([-p * s, p * c, zero], axis=-1),
                     np.stack([-m * c, -m * s, np.asarray(j1) + zero], axis=-1)], axis=-2)
    return rows


def _assemble(ip, im, i1, phi, scale):
    s, c = math.sin(phi), math.cos(phi)
    return scale * np.array([[-ip * s, ip * c, 0.0], [-im * c, -im * s, i1]], dtype=complex)


def _hankel_exp(nu, rho, d):
    """``int_0^inf q J_nu(q rho) e^{-q d} dq`` in closed form."""
    r = math.hypot(rho, d)
    if nu == 0:
        return d / r**3
    return rho ** (-nu) * (r - d) ** nu * (nu * r + d) / r**3


def dia_radial(params, rho):
    """Closed-form diamagnetic radial integrals ``(I_p, I_m, I_1)`` (no cutoff)."""
    d = params.d
    if d <= 0:
        raise ValidationError("the diamagnetic response needs a finite height d > 0", field="d")
    w = drude_weight(params) / (2.0 * math.pi)
    h0, h1, h2 = (_hankel_exp(n, rho, d) for n in (0, 1, 2))
    return w * 0.5 * (h0 + h2), w * 0.5 * (h0 - h2), w * h1


def q_cutoff(params):
    if params.d <= 0:
        raise ValidationError("q cutoff needs d > 0", field="d")
    return min(30.0 / params.d, 10.0 * params.k_f)


def para_radial(params, rho, omega, mode="exact", spec=DEFAULT_SPEC):
    """Paramagnetic radial integrals ``(I_p, I_m, I_1)`` by oscillation-split quadrature."""
    q_cut = q_cutoff(params)
    breaks = noise_breakpoints(params, abs(omega)) if omega != 0 else ()
    if breaks:
        lo, hi, kinks = breaks
        breaks = tuple(b for b in (lo, hi, *kinks) if b < q_cut)

    def base(q):
        return q / (2.0 * math.pi) * np.exp(-q * params.d) * kubo_coefficient(params, q, omega, mode, "paramagnetic")

    def over_x(q):
        # J1(x)/x = (J0 + J2)/2, evaluated at x = q rho
        return base(q) / (q * rho)

    try:
        ip, _ = integrate_hankel_damped(over_x, 1, rho, 0.0, q_cut, spec, q_min=0.0, breakpoints=breaks)
        i0, _ = integrate_hankel_damped(base, 0, rho, 0.0, q_cut, spec, q_min=0.0, breakpoints=breaks)
        i1, _ = integrate_hankel_damped(base, 1, rho, 0.0, q_cut, spec, q_min=0.0, breakpoints=breaks)
    except ConvergenceError as exc:
        exc.diagnostics.update({"rho": rho, "omega": omega})
        raise
    return ip, i0 - ip, i1


def chi(params, rho, phi, omega, mode="exact", part="total", spec=DEFAULT_SPEC):
    """Response matrix ``chi`` (2 x 3 complex) at one point and frequency."""
    if part not in PARTS:
        raise ValidationError(f"part must be one of {PARTS}", field="part")
    if not rho > 0:
        raise ValidationError("rho must be positive", field="rho")
    scale = 2.0 * math.pi * params.gamma / C_LIGHT
    total = np.zeros((2, 3), dtype=complex)
    if part in ("paramagnetic", "total"):
        total += _assemble(*para_radial(params, rho, omega, mode, spec), phi, scale)
    if part in ("diamagnetic", "total"):
        total += _assemble(*dia_radial(params, rho), phi, scale)
    return total


def far_field_para(params, rho, phi, omega):
    """Asymptotic paramagnetic ``chi`` for ``rho w / v_F >> 1`` and ``d -> 0``."""
    pref = 2.0 * drude_weight(params) * params.gamma / C_LIGHT * np.exp(1j * omega * rho / params.v_f) / rho**2
    a = 1j * params.v_f / (omega * rho)
    s, c = math.sin(phi), math.cos(phi)
    return pref * np.array([[a * s, -a * c, 0.0], [-c, -s, -1j * np.sign(omega)]])


def far_field_dia(params, rho, phi):
    pref = -drude_weight(params) * params.gamma / (C_LIGHT * rho**2)
    s, c = math.sin(phi), math.cos(phi)
    return pref * np.array([[s, -c, 0.0], [-c, -s, -1.0]], dtype=complex)


# --------------------------------------------------------------------------
# drive spectrum of the decaying macrospin

def omega_grid(N, gamma0, delta, resolution=16, span=8.0):
    """Symmetric FFT frequency grid ``k dw``, ``k = -n/2 .. n/2 - 1`` (sorted).

    ``dw = N gamma0 / resolution`` and ``n`` is the smallest power of two
    with ``n dw >= span * max(Delta, N gamma0)``.
    """
    dw = N * gamma0 / resolution
    n = 1
    while n * dw < span * max(abs(delta), N * gamma0):
        n *= 2
    return dw * np.arange(-n // 2, n // 2)


def _check_grid(N, gamma0, delta, omega):
    omega = np.asarray(omega, dtype=float)
    n = omega.size
    if n < 2 or n & (n - 1):
        raise ValidationError("omega grid must have a power-of-two length", field="omega")
    dw = omega[1] - omega[0]
    if not np.allclose(np.diff(omega), dw, rtol=1e-9, atol=0) or abs(omega[n // 2]) > 1e-12 * dw:
        raise ValidationError("omega grid must be uniform, sorted and contain 0 at index n/2", field="omega")
    if dw > N * gamma0 / 16 * (1 + 1e-12):
        raise ValidationError("omega grid too coarse: need dw <= N gamma0 / 16", field="omega")
    if n * dw < 8 * abs(delta) * (1 - 1e-12):
        raise ValidationError("omega grid span must be >= 8 Delta", field="omega")
    return omega, dw


def spin_spectrum(N, gamma0, delta, omega):
    """Fourier transforms ``S_x, S_y, S_z`` (units of hbar s) of the exact macrospin.

    ``S^{+/-}`` are the analytic sech transforms. ``S_z`` is synthesised by an
    FFT of ``tanh(a t) - erf(a t)`` (smooth and exponentially decaying) plus the
    principal-value transform ``(2i/w) exp(-w^2 / 4 a^2)`` of ``erf(a t)``,
    with ``a = N gamma0 / 2``; the ``w = 0`` bin is set to zero.
    """
    omega, dw = _check_grid(N, gamma0, delta, omega)
    n = omega.size
    width = N * gamma0
    with np.errstate(over="ignore"):
        s_plus = (math.pi / gamma0) / np.cosh(math.pi * (omega - delta) / width)
        s_minus = (math.pi / gamma0) / np.cosh(math.pi * (omega + delta) / width)
    sx = 0.5 * (s_plus + s_minus) + 0j
    sy = (s_plus - s_minus) / 2j

    a = 0.5 * width
    dt = 2.0 * math.pi / (n * dw)
    j = np.arange(n)
    t = dt * np.where(j < n // 2, j, j - n)
    smooth = np.tanh(a * t) - special.erf(a * t)
    spec_wrapped = dt * fft_forward(smooth)
    spec_sorted = np.fft.fftshift(spec_wrapped)
    with np.errstate(divide="ignore", invalid="ignore"):
        pv = np.where(omega != 0, 2j / omega * np.exp(-(omega / (2 * a)) ** 2), 0.0)
    tanh_ft = spec_sorted + pv
    sz = -0.5 * N * tanh_ft
    sz[n // 2] = 0.0
    return sx, sy, sz


def spin_spectrum_sz_exact(N, gamma0, omega):
    """Closed form ``-(i pi / gamma0) csch(pi w / N gamma0)`` (zero at ``w = 0``)."""
    omega = np.asarray(omega, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        out = np.where(omega != 0, -1j * math.pi / gamma0 / np.sinh(math.pi * omega / (N * gamma0)), 0.0)
    return out


# --------------------------------------------------------------------------
# time-domain current wave

@dataclass
class CurrentFrame:
    """Current density on a polar grid at time ``t`` (statA / cm)."""

    t: float
    rho: np.ndarray
    phi: np.ndarray
    j_rho: np.ndarray
    j_phi: np.ndarray


@dataclass(frozen=True)
class PolarGrid:
    rho: np.ndarray
    phi: np.ndarray

    @classmethod
    def default(cls, params, N, gamma0, n_rho=256, n_phi=128, rho_range=(0.05, 4.0)):
        """Grid in units of ``2 v_F / (gamma0 N)``."""
        unit = 2.0 * params.v_f / (gamma0 * N)
        rho = np.linspace(rho_range[0], rho_range[1], n_rho) * unit
        phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
        return cls(rho, phi)


class CurrentSynthesizer:
    """Radial response functions on a global q grid, reused across frames.

    The paramagnetic radial integrals ``I(rho, w)`` are evaluated as matrix
    products between Bessel tables and the Kubo kernel on Gauss-Legendre
    nodes with panel width at most a quarter period of ``J(q rho_max)``. Time
    frames are then a frequency sum over the drive bins with non-negligible
    weight, using ``chi(-w) S(-w) = conj(chi(w) S(w))``.
    """

    def __init__(self, params, N, gamma0, rho, mode="exact", drive_floor=1e-12, order=8,
                 rho_chunk=32, omega_chunk=48):
        self.params = params
        self.N = int(N)
        self.gamma0 = float(gamma0)
        self.rho = np.asarray(rho, dtype=float)
        if np.any(self.rho <= 0):
            raise ValidationError("rho grid must be positive", field="rho")
        self.mode = mode
        delta = params.delta
        self.omega = omega_grid(N, gamma0, delta)
        sx, sy, sz = spin_spectrum(N, gamma0, delta, self.omega)
        keep = (self.omega > 0) & (np.maximum.reduce([abs(sx), abs(sy), abs(sz)])
                                    > drive_floor * max(abs(sx).max(), abs(sz).max()))
        self.dw = self.omega[1] - self.omega[0]
        self.w = self.omega[keep]
        self.sx, self.sy, self.sz = sx[keep] * HBAR, sy[keep] * HBAR, sz[keep] * HBAR

        q_cut = q_cutoff(params)
        width = 0.5 * math.pi / self.rho.max()
        n_panel = int(math.ceil(q_cut / width))
        edges = np.linspace(0.0, q_cut, n_panel + 1)
        q, wq = panel_nodes(edges[:-1], edges[1:], order=order)
        base = wq * q / (2.0 * math.pi) * np.exp(-q * params.d)

        n_r, n_w = self.rho.size, self.w.size
        self.ip = np.zeros((n_r, n_w), dtype=complex)
        self.im = np.zeros((n_r, n_w), dtype=complex)
        self.i1 = np.zeros((n_r, n_w), dtype=complex)
        kernels = []
        for start in range(0, n_w, omega_chunk):
            ww = self.w[start:start + omega_chunk]
            kub = kubo_coefficient(params, q[:, None], ww[None, :], mode, "paramagnetic")
            kernels.append((start, base[:, None] * kub))
        for rs in range(0, n_r, rho_chunk):
            rr = self.rho[rs:rs + rho_chunk]
            x = np.multiply.outer(rr, q)
            b0, b1 = special.j0(x), special.j1(x)
            bx = b1 / x
            for start, kern in kernels:
                sl = slice(start, start + kern.shape[1])
                p = bx @ kern
                self.ip[rs:rs + rr.size, sl] = p
                self.im[rs:rs + rr.size, sl] = b0 @ kern - p
                self.i1[rs:rs + rr.size, sl] = b1 @ kern
        self.scale = 2.0 * math.pi * params.gamma / C_LIGHT
        self.dia = np.array([dia_radial(params, r) for r in self.rho]).T if params.d > 0 else None

    def radial_time(self, t):
        """``(X_p, Y_p, X_m, Y_m, Z_1)`` paramagnetic radial functions at time ``t``."""
        phase = np.exp(-1j * self.w * t) * self.dw / (2.0 * math.pi)

        def synth(radial, drive):
            return 2.0 * np.real(radial @ (phase * drive))

        return (synth(self.ip, self.sx), synth(self.ip, self.sy), synth(self.im, self.sx),
                synth(self.im, self.sy), synth(self.i1, self.sz))

    def frame(self, t, phi, part="total"):
        """Current frame at time ``t`` on angles ``phi``."""
        if part not in PARTS:
            raise ValidationError(f"part must be one of {PARTS}", field="part")
        phi = np.asarray(phi, dtype=float)
        s, c = np.sin(phi)[None, :], np.cos(phi)[None, :]
        j_rho = np.zeros((self.rho.size, phi.size))
        j_phi = np.zeros_like(j_rho)
        if part in ("paramagnetic", "total"):
            xp, yp, xm, ym, z1 = (v[:, None] for v in self.radial_time(t))
            j_rho += self.scale * (-xp * s + yp * c)
            j_phi += self.scale * (-xm * c - ym * s + z1)
        if part in ("diamagnetic", "total"):
            if self.dia is None:
                raise ValidationError("the diamagnetic response needs d > 0", field="d")
            traj = macrospin_exact(self.N, self.gamma0, self.params.delta, [t])
            sx, sy, sz = (HBAR * float(v[0]) for v in (traj.sx, traj.sy, traj.sz))
            ip, im, i1 = (v[:, None] for v in self.dia)
            j_rho += self.scale * ip * (-sx * s + sy * c)
            j_phi += self.scale * (im * (-sx * c - sy * s) + i1 * sz)
        return CurrentFrame(float(t), self.rho, phi, j_rho, j_phi)


def current_field(params, N, gamma0, grid, t_list, part="total", mode="exact"):
    """Current frames (in time order) of the wave emitted by the decaying macrospin."""
    synth = CurrentSynthesizer(params, N, gamma0, grid.rho, mode=mode)
    t_sorted = sorted(float(t) for t in t_list)
    window = math.pi / synth.dw
    if any(abs(t) >= window for t in t_sorted):
        raise ValidationError(f"frame times must lie within the FFT window |t| < {window:.3e}", field="t")
    return [synth.frame(t, grid.phi, part) for t in t_sorted]


def polar_divergence(frame):
    """Centered-difference ``div J`` and the magnitude of its two terms on interior points."""
    rho, phi = frame.rho, frame.phi
    dphi = phi[1] - phi[0]
    rj = rho[:, None] * frame.j_rho
    d_rho = (rj[2:] - rj[:-2]) / (rho[2:] - rho[:-2])[:, None] / rho[1:-1, None]
    d_phi = (np.roll(frame.j_phi, -1, axis=1) - np.roll(frame.j_phi, 1, axis=1))[1:-1] / (2 * dphi) / rho[1:-1, None]
    return d_rho + d_phi, np.abs(d_rho) + np.abs(d_phi)


def kramers_kronig_real(x_eval):
    """Re g reconstructed from Im g alone by a principal-value Hilbert transform.

    ``Re g(x) = (1/pi) PV int_{-1}^{1} Im g(y) / (y - x) dy``; the continuum is
    compact so no subtraction is needed. Inside ``(-1, 1)`` the singular point
    is handled by QUADPACK's Cauchy weight.
    """
    x_eval = np.atleast_1d(np.asarray(x_eval, dtype=float))
    out = np.empty_like(x_eval)

    def im(y):
        return float(np.imag(g_complex(y)))

    for i, x in enumerate(x_eval):
        if abs(x) < 1:
            val, _ = integrate.quad(im, -1.0, 1.0, weight="cauchy", wvar=x, epsabs=1e-13, epsrel=1e-12, limit=400)
        else:
            val, _ = integrate.quad(lambda y: im(y) / (y - x), -1.0, 1.0, epsabs=1e-13, epsrel=1e-12, limit=400)
        out[i] = val / math.pi
    return out


# --------------------------------------------------------------------------
# wave diagnostics

def wave_envelope(frame, smooth_length=None):
    """``rho^2`` times the azimuthal rms of ``J_phi`` (its ring mean removed).

    With ``smooth_length`` the envelope is box-averaged over that radial
    length, which suppresses the ripple left by the counter-rotating drive.
    """
    c0 = frame.j_phi.mean(axis=1, keepdims=True)
    env = frame.rho**2 * np.sqrt(np.mean((frame.j_phi - c0) ** 2, axis=1))
    if smooth_length:
        width = max(1, int(round(smooth_length / (frame.rho[1] - frame.rho[0]))))
        env = ndimage.uniform_filter1d(env, width, mode="nearest")
    return env


def front_shift(env_a, env_b, rho, half_window, guess, samples=4001):
    """Radial shift of ``env_b`` relative to ``env_a`` by windowed cross-correlation.

    The window of half-width ``half_window`` is centred on the maximum of
    ``env_a``; shifts in ``[guess/2, 3 guess/2]`` are scanned on a cubic
    spline of ``env_b``.
    """
    centre = rho[np.argmax(env_a)]
    win = np.abs(rho - centre) < half_window
    spline = interpolate.CubicSpline(rho, env_b)
    shifts = np.linspace(0.5 * guess, 1.5 * guess, samples)
    r = rho[win]
    score = [np.dot(env_a[win], spline(np.clip(r + s, rho[0], rho[-1]))) for s in shifts]
    return float(shifts[int(np.argmax(score))])


def azimuthal_harmonic(frame, m=1):
    """``<J_phi e^{-i m phi}>_phi`` for every radius."""
    return np.mean(frame.j_phi * np.exp(-1j * m * frame.phi)[None, :], axis=1)


def radial_period(frame, rho_min, rho_max):
    """Radial period from the slope of the unwrapped phase of the first harmonic."""
    zone = (frame.rho >= rho_min) & (frame.rho <= rho_max)
    phase = np.unwrap(np.angle(azimuthal_harmonic(frame)[zone]))
    slope = np.polyfit(frame.rho[zone], phase, 1)[0]
    return 2.0 * math.pi / abs(slope)


def azimuthal_winding(values):
    """Winding (in turns) of the analytic signal of a ring profile, mean removed."""
    v = np.asarray(values, dtype=float)
    h = signal.hilbert(v - v.mean())
    phase = np.unwrap(np.angle(np.append(h, h[0])))
    return float((phase[-1] - phase[0]) / (2.0 * math.pi))


def loglog_slope(x, y):
    return float(np.polyfit(np.log(x), np.log(np.abs(y)), 1)[0])

"""Independent reference implementations used by the tests.

These deliberately take a different route from the package code: explicit
k-grids, generic ODE steppers, dense Lindblad evolution.
"""

import itertools
import math

import numpy as np

from fermiemit.units import HBAR


# --------------------------------------------------------------------------
# brute-force Fermi-sea sums

def _pair_weight_grid(params, omega, q, sigma_kx, weight, n_kx=801, n_ky=4001):
    """``int d^2k w(k_y) n_k (1 - n_{k+q}) delta_sigma(w - dE/hbar)`` on a 2D grid.

    ``q`` is along x; the Gaussian delta is written in k_x, where the
    transition energy is linear: ``hbar w = hbar^2 (2 k_x q + q^2) / 2m``.
    """
    kf, m = params.k_f, params.mass
    k0 = (m * omega / HBAR - 0.5 * q * q) / q
    kx = k0 + sigma_kx * np.linspace(-7.0, 7.0, n_kx)
    dkx = kx[1] - kx[0]
    edges = np.linspace(-kf, kf, n_ky + 1)
    ky = 0.5 * (edges[1:] + edges[:-1])
    dky = edges[1] - edges[0]
    KX, KY = np.meshgrid(kx, ky, indexing="ij")
    occ = (KX**2 + KY**2 < kf**2) & ((KX + q) ** 2 + KY**2 > kf**2)
    gauss = np.exp(-0.5 * ((kx - k0) / sigma_kx) ** 2) / (math.sqrt(2 * math.pi) * sigma_kx)
    # delta(w - hbar(2 k_x q + q^2)/2m) = (m / hbar q) delta(k_x - k0)
    inner = np.sum(occ * weight(KY), axis=1) * dky
    return (m / (HBAR * q)) * np.sum(gauss * inner) * dkx


def _extrapolate_sigma(f, sigmas):
    """Fit ``a + b sigma^2`` and return ``a``."""
    vals = np.array([f(s) for s in sigmas])
    coef = np.polyfit(np.asarray(sigmas) ** 2, vals, 1)
    return coef[-1]


def transverse_C_bruteforce(params, omega, q, sigmas=(0.03, 0.02, 0.01)):
    """Dimensionless ``C(q, w)`` (both spins) from the golden-rule k-sum.

    ``C = hbar q I / (m k_F^3)`` with ``I = int d^2k k_perp^2 n(1-n) delta``.
    """
    kf = params.k_f
    integral = _extrapolate_sigma(
        lambda s: _pair_weight_grid(params, omega, q, s * kf, lambda ky: ky**2), sigmas)
    return HBAR * q * integral / (params.mass * kf**3)


def simple_noise_bruteforce(params, coupling, omega, q, sigmas=(0.03, 0.02, 0.01)):
    """``(1/2 pi) int d^2k V^2 n_k (1 - n_{k+q}) delta(w - dE/hbar)`` (no spin sum)."""
    kf = params.k_f
    integral = _extrapolate_sigma(
        lambda s: _pair_weight_grid(params, omega, q, s * kf, lambda ky: np.ones_like(ky)), sigmas)
    return coupling**2 * integral / (2.0 * math.pi)


def green_bruteforce(params, q, omega, etas=(4e-3, 2e-3, 1e-3), n_kx=400001):
    """Retarded transverse current response from the Lindhard-type k-sum.

    ``G = 2 hbar int d^2k/(2pi)^2 (e hbar k_perp/m)^2 (n_k - n_{k+q}) /
    (hbar w + e_k - e_{k+q} + i eta)``. The k_perp integral over each Fermi
    disk is done exactly, the k_parallel sum on a dense grid, and the
    broadening ``eta`` (units of E_F) is extrapolated linearly to zero.
    """
    from fermiemit.units import E_CHARGE

    kf, m, ef = params.k_f, params.mass, params.e_f
    kx = np.linspace(-kf, kf, n_kx)
    dk = kx[1] - kx[0]
    w_ky = (2.0 / 3.0) * np.maximum(kf**2 - kx**2, 0.0) ** 1.5
    trap = np.full_like(kx, dk)
    trap[[0, -1]] *= 0.5
    hw = HBAR * omega
    d_plus = -HBAR**2 * (2 * kx * q + q * q) / (2 * m)   # e_k - e_{k+q}, k in the disk
    d_minus = -HBAR**2 * (2 * kx * q - q * q) / (2 * m)  # e_{k'-q} - e_{k'}, k' in the disk
    pref = 2.0 * HBAR * (E_CHARGE * HBAR / m) ** 2 / (4.0 * math.pi**2)

    def at(eta):
        e = 1j * eta * ef
        s = np.sum(trap * w_ky * (1.0 / (hw + d_plus + e) - 1.0 / (hw + d_minus + e)))
        return pref * s

    vals = np.array([at(e) for e in etas])
    coef_re = np.polyfit(etas, vals.real, 1)
    coef_im = np.polyfit(etas, vals.imag, 1)
    return coef_re[-1] + 1j * coef_im[-1]


# --------------------------------------------------------------------------
# dynamics oracles

def rk4(f, y0, t_end, dt):
    y = np.array(y0, dtype=complex)
    n = int(round(t_end / dt))
    h = t_end / n
    t = 0.0
    for _ in range(n):
        k1 = f(t, y)
        k2 = f(t + h / 2, y + h / 2 * k1)
        k3 = f(t + h / 2, y + h / 2 * k2)
        k4 = f(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return y


def lindblad_excited_state_rates(rates):
    """``R`` and ``dR/dt`` at t=0 for the fully excited state from dense operators.

    ``R(t) = sum_nm gamma_nm <s+_n s-_m>``. The dissipator is written in the
    collective form ``D[rho] = sum_nm gamma_nm (s-_m rho s+_n - 1/2 {s+_n s-_m, rho})``,
    evaluated on the full 2^N space, and ``dR/dt = Tr(R_op D[rho])``.
    """
    rates = np.asarray(rates)
    n = rates.shape[0]
    eye = np.eye(2)

    def op(single, k):
        mats = [single if j == k else eye for j in range(n)]
        out = mats[0]
        for m_ in mats[1:]:
            out = np.kron(out, m_)
        return out

    # basis index 0 = excited, 1 = ground; s- maps excited -> ground
    lower = np.array([[0, 0], [1, 0]], dtype=complex)
    s_minus = [op(lower, k) for k in range(n)]
    s_plus = [s.conj().T for s in s_minus]
    dim = 2**n
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    r_op = sum(rates[a, b] * s_plus[a] @ s_minus[b] for a in range(n) for b in range(n))
    drho = np.zeros_like(rho)
    for a, b in itertools.product(range(n), repeat=2):
        g = rates[a, b]
        if g == 0:
            continue
        drho += g * (s_minus[b] @ rho @ s_plus[a] - 0.5 * (s_plus[a] @ s_minus[b] @ rho + rho @ s_plus[a] @ s_minus[b]))
    return float(np.real(np.trace(r_op @ rho))), float(np.real(np.trace(r_op @ drho)))


def g2_from_jump_operators(rates):
    """``g2(0)`` for the fully excited state via the eigenmode jump operators.

    ``L_k = sqrt(g_k) sum_n v_k[n]^* s-_n``; ``g2 = sum_kl <L_k^+ L_l^+ L_l L_k> / R^2``.
    """
    rates = np.asarray(rates)
    n = rates.shape[0]
    values, vectors = np.linalg.eigh(rates)
    eye = np.eye(2)
    lower = np.array([[0, 0], [1, 0]], dtype=complex)

    def op(single, k):
        out = np.array([[1.0 + 0j]])
        for j in range(n):
            out = np.kron(out, single if j == k else eye)
        return out

    s_minus = [op(lower, k) for k in range(n)]
    # gamma_nm = sum_k g_k v_k[n] v_k[m]^*, R_op = sum_nm gamma_nm s+_n s-_m = sum_k L_k^+ L_k
    jumps = [math.sqrt(max(g, 0.0)) * sum(np.conj(vectors[i, k]) * s_minus[i] for i in range(n))
             for k, g in enumerate(values)]
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = 1.0
    rate = sum(np.vdot(L @ psi, L @ psi).real for L in jumps)
    pair = sum(np.vdot(Ll @ Lk @ psi, Ll @ Lk @ psi).real for Lk in jumps for Ll in jumps)
    return pair / rate**2

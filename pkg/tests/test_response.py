import math

import numpy as np
import pytest

import oracles
from fermiemit import noise, response as R
from fermiemit.config import default_params
from fermiemit.errors import ConvergenceError, SingularInputError, ValidationError
from fermiemit.numerics import fft_forward
from fermiemit.units import HBAR, M_ELECTRON


@pytest.fixture(scope="module")
def p():
    return default_params()


def test_g_examples():
    assert R.g_complex(0.0) == pytest.approx(1j)
    assert R.g_complex(1.0) == pytest.approx(-0.5)
    assert R.g_complex(2.0) == pytest.approx(8 - 3 - 3**1.5, abs=1e-12)
    assert R.g_complex(2.0).real == pytest.approx(-0.196, abs=5e-4)
    assert R.g_complex(0.5) == pytest.approx(0.125 - 0.75 + 1j * 0.75**1.5)
    x = np.linspace(-4, 4, 81)
    g = R.g_complex(x)
    assert np.allclose(g.real, -g[::-1].real, atol=1e-14)
    assert np.allclose(g.imag, g[::-1].imag)
    # stable tail: x^3 - 3x/2 - (x^2 - 1)^{3/2} ~ -3 / (8x)
    assert R.g_complex(1e6).real == pytest.approx(-3 / 8e6, rel=1e-9)


def test_g_prime_finite_difference():
    rng = np.random.default_rng(20)
    x = rng.uniform(-3, 3, 100)
    x = x[np.abs(np.abs(x) - 1) > 1e-2]
    h = 1e-6
    fd = (R.g_complex(x + h) - R.g_complex(x - h)) / (2 * h)
    assert np.max(np.abs(fd - R.g_prime(x))) < 1e-6
    assert R.g_prime(0.0) == pytest.approx(-1.5)
    assert R.g_prime(2.0).imag == 0.0


def test_green_limits(p):
    q = 0.05 * p.k_f
    for nu in (0.02, 0.3, 0.7, 1.5, 3.0):
        w = nu * p.v_f * q
        assert R.green_exact(p, q, w) == pytest.approx(R.green_smallq(p, q, w), rel=0.01)
    # both branches outside the continuum
    q = 0.1 * p.k_f
    assert R.green_exact(p, q, 2.0 * p.v_f * q).imag == 0.0
    w = np.linspace(0.01, 2.0, 50) * p.e_f / HBAR
    assert np.all(np.imag(R.green_exact(p, 0.7 * p.k_f, w)) <= 0)
    with pytest.raises(SingularInputError):
        R.green_exact(p, 0.0, 1.0)
    with pytest.raises(SingularInputError):
        R.green_smallq(p, -1.0, 1.0)


@pytest.mark.parametrize("q_rel,w_rel", [(0.3, 0.1), (0.8, 0.5), (1.5, 0.2), (0.5, 1.7), (2.5, 4.0)])
def test_green_vs_kgrid(p, q_rel, w_rel):
    q, w = q_rel * p.k_f, w_rel * p.e_f / HBAR
    ref = oracles.green_bruteforce(p, q, w)
    got = R.green_exact(p, q, w)
    assert abs(got - ref) <= 0.02 * abs(ref)


def test_kubo_parts(p):
    q = 0.3 * p.k_f
    w = np.array([0.0, 0.1, 1.0]) * p.e_f / HBAR
    dia = R.kubo_coefficient(p, q, w, part="diamagnetic")
    assert np.allclose(dia, R.drude_weight(p))
    tot = R.kubo_coefficient(p, q, w)
    para = R.kubo_coefficient(p, q, w, part="paramagnetic")
    assert np.allclose(tot, para + dia)
    with pytest.raises(ValidationError):
        R.kubo_coefficient(p, q, 1.0, mode="bogus")
    with pytest.raises(ValidationError):
        R.kubo_coefficient(p, q, 1.0, part="bogus")


def test_kubo_vanishes_uniform_static(p):
    dw = R.drude_weight(p)
    for mode in R.MODES:
        assert abs(R.kubo_coefficient(p, 1e-3 * p.k_f, 0.0, mode)) <= 1e-6 * dw


def test_fdt_matches_noise(p):
    rng = np.random.default_rng(21)
    for _ in range(200):
        q = rng.uniform(1e-3, 3) * p.k_f
        w = rng.uniform(1e-4, 2) * p.e_f / HBAR
        a, b = noise.oersted_noise(p, w, q), R.fdt_noise(p, q, w)
        assert b == pytest.approx(a, rel=1e-6, abs=1e-300)


def test_kramers_kronig():
    x = np.concatenate([np.linspace(-3, 3, 25), [0.999, -1.001]])
    assert np.max(np.abs(R.kramers_kronig_real(x) - R.g_complex(x).real)) < 1e-3


def test_landau(p):
    value, err = R.landau_chi(p)
    assert value == pytest.approx(R.landau_chi_closed_form(p), rel=1e-3)
    other, _ = R.landau_chi(p, ratio=1 / 3)
    assert other == pytest.approx(value, rel=1e-4)
    pe = p.replace(mass=M_ELECTRON)
    assert R.landau_chi(pe)[0] / R.pauli_chi() == pytest.approx(-1 / 3, rel=1e-3)


def test_landau_nonconvergence(p, monkeypatch):
    monkeypatch.setattr(R, "kubo_coefficient", lambda *a, **k: 1.0 + np.random.default_rng().uniform())
    with pytest.raises(ConvergenceError):
        R.landau_chi(p)


def test_kernel_examples():
    for phi in (0.0, 0.4, 2.0, 5.5):
        s, c = math.sin(phi), math.cos(phi)
        k0 = R.kernel_K(0.0, phi)
        assert np.allclose(k0, [[-s / 2, c / 2, 0], [-c / 2, -s / 2, 0]])
        for x in (0.3, 2.7, 11.0):
            k = R.kernel_K(x, phi)
            assert np.allclose(k, R.kernel_K(x, phi + 2 * np.pi))
            assert k[1, 2] == pytest.approx(R.kernel_K(x, 0.0)[1, 2])
            assert k[0, 2] == 0.0
    assert R.kernel_K(np.ones(4), np.zeros(4)).shape == (4, 2, 3)


def test_dia_needs_height(p):
    with pytest.raises(ValidationError):
        R.chi(p, 1e-6, 0.0, 1.0, part="diamagnetic")
    with pytest.raises(ValidationError):
        R.chi(p, 0.0, 0.0, 1.0)


def test_far_field(p):
    w = 3e-3 * p.e_f / HBAR
    L = p.v_f / w
    q = p.replace(d=1e-3 * L)
    rho, phi = 50 * L, 0.7
    para = R.chi(q, rho, phi, w, part="paramagnetic")
    ff = R.far_field_para(q, rho, phi, w)
    assert np.linalg.norm(para - ff) <= 0.1 * np.linalg.norm(ff)
    dia = R.chi(q, rho, phi, w, part="diamagnetic")
    ffd = R.far_field_dia(q, rho, phi)
    assert np.linalg.norm(dia - ffd) <= 0.1 * np.linalg.norm(ffd)


def test_static_falloff(p):
    s = p.replace(d=10 * p.lambda_f)
    rho = np.geomspace(10, 100, 8) * s.d
    vals = np.array([R.chi(s, r, 0.3, 0.0)[1, 2] for r in rho])
    assert R.loglog_slope(rho, vals) == pytest.approx(-4.0, abs=0.2)


def test_omega_grid_and_errors():
    N, g0, dl = 20, 1.0, 100.0
    w = R.omega_grid(N, g0, dl)
    n = w.size
    assert n & (n - 1) == 0 and w[n // 2] == 0
    assert w[1] - w[0] <= N * g0 / 16 and n * (w[1] - w[0]) >= 8 * dl
    with pytest.raises(ValidationError):
        R.spin_spectrum(N, g0, dl, w[:-1])
    with pytest.raises(ValidationError):
        R.spin_spectrum(N, g0, dl, R.omega_grid(N, g0, dl, resolution=4))
    with pytest.raises(ValidationError):
        R.spin_spectrum(N, g0, dl, R.omega_grid(N, g0, dl, span=2))


def test_spin_spectrum_vs_fft():
    N, g0, dl = 20, 1.0, 100.0
    w = R.omega_grid(N, g0, dl, span=16)
    n, dw = w.size, w[1] - w[0]
    sx, sy, sz = R.spin_spectrum(N, g0, dl, w)
    dt = 2 * np.pi / (n * dw)
    j = np.arange(n)
    t = dt * np.where(j < n // 2, j, j - n)
    traj = R.macrospin_exact(N, g0, dl, t)
    for analytic, samples in ((sx, traj.sx), (sy, traj.sy)):
        num = np.fft.fftshift(dt * fft_forward(samples))
        interior = np.abs(w) < 0.5 * w.max()
        assert np.max(np.abs(num - analytic)[interior]) <= 1e-6 * np.max(np.abs(analytic))
    exact = R.spin_spectrum_sz_exact(N, g0, w)
    assert np.max(np.abs(sz - exact)) <= 1e-6 * np.max(np.abs(exact[np.abs(w) > dw / 2]))
    keep = slice(1, None)
    assert np.allclose(sz[keep], -sz[keep][::-1], atol=1e-9 * np.abs(sz).max())
    s_plus = sx + 1j * sy
    assert w[np.argmax(np.abs(s_plus))] == pytest.approx(dl, abs=dw)


# --------------------------------------------------------------------------
# time-domain current wave on a reduced grid

N_SPINS = 20


@pytest.fixture(scope="module")
def wave(p):
    g0 = 2 * p.e_f / (HBAR * 5e5)
    q = p.replace(delta=100 * g0, d=1e-3 * p.v_f / g0)
    grid = R.PolarGrid.default(q, N_SPINS, g0, n_rho=96, n_phi=64)
    synth = R.CurrentSynthesizer(q, N_SPINS, g0, grid.rho)
    return q, g0, grid, synth


def test_front_causality(wave):
    q, g0, grid, synth = wave
    u = 1 / (N_SPINS * g0)
    peak = max(np.abs(synth.frame(t * u, grid.phi, "paramagnetic").j_rho).max() for t in np.linspace(0, 8, 9))
    checked = 0
    for t in (-18.0, -16.0, -14.0):
        fr = synth.frame(t * u, grid.phi, "paramagnetic")
        ahead = grid.rho > q.v_f * (t + 20.0) * u
        assert ahead.any()
        assert np.abs(fr.j_rho[ahead]).max() <= 1e-3 * peak
        checked += 1
    assert checked == 3


def test_frames_finite_and_divergence(wave):
    q, g0, grid, synth = wave
    u = 1 / (N_SPINS * g0)
    fr = synth.frame(4 * u, grid.phi)
    assert np.all(np.isfinite(fr.j_rho)) and np.all(np.isfinite(fr.j_phi))
    div, terms = R.polar_divergence(synth.frame(4 * u, grid.phi, "paramagnetic"))
    zone = grid.rho[1:-1] > 4 * q.v_f / q.delta
    assert np.max(np.abs(div[zone])) <= 0.02 * np.max(terms[zone])


def test_current_field_window(wave):
    q, g0, grid, _ = wave
    small = R.PolarGrid(grid.rho[::16], grid.phi)
    with pytest.raises(ValidationError):
        R.current_field(q, N_SPINS, g0, small, [1e9 / g0])
    frames = R.current_field(q, N_SPINS, g0, small, [2 / (N_SPINS * g0), 0.0])
    assert [f.t for f in frames] == sorted(f.t for f in frames)


def test_winding_helper():
    phi = np.linspace(0, 2 * np.pi, 128, endpoint=False)
    assert R.azimuthal_winding(np.cos(phi + 0.3)) == pytest.approx(1.0, abs=1e-9)
    assert R.azimuthal_winding(np.cos(2 * phi)) == pytest.approx(2.0, abs=1e-9)

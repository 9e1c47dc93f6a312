import math

import numpy as np
import pytest

import oracles
from fermiemit import collective, decay
from fermiemit.config import default_params
from fermiemit.errors import ValidationError
from fermiemit.units import HBAR, DipoleEnsemble


@pytest.fixture(scope="module")
def p():
    return default_params()


def _random_psd(rng, n, rank=None):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    v = a[:, : (rank or n)]
    return v @ v.conj().T


@pytest.mark.parametrize("N", [2, 3, 4, 7])
def test_closed_forms(N):
    g = 1.7
    diag, const = g * np.eye(N), g * np.ones((N, N))
    assert collective.dtR_excited(diag) == pytest.approx(-N * g**2, rel=1e-12)
    assert collective.dtR_excited(const) == pytest.approx(N * (N - 2) * g**2, rel=1e-12, abs=1e-12)
    assert collective.g2_zero(diag) == pytest.approx(1 - 1 / N, rel=1e-12)
    assert collective.g2_zero(const) == pytest.approx(2 * (N - 1) / N, rel=1e-12)
    assert collective.R_coherent(diag) == pytest.approx(N * g / 2)
    assert collective.R_coherent(const) == pytest.approx(N**2 * g / 2)


def test_g2_examples():
    assert collective.g2_zero(np.eye(4)) == pytest.approx(0.75)
    assert collective.g2_zero(np.ones((4, 4))) == pytest.approx(1.5)
    with pytest.raises(ZeroDivisionError):
        collective.g2_zero(np.zeros((3, 3)))
    with pytest.raises(ValidationError):
        collective.dtR_excited(np.ones((2, 3)))


def test_against_lindblad_and_jump_oracles():
    rng = np.random.default_rng(10)
    for n in (2, 3, 4):
        for rank in (1, n):
            m = _random_psd(rng, n, rank)
            r, dr = oracles.lindblad_excited_state_rates(m)
            assert np.trace(m).real == pytest.approx(r, rel=1e-12)
            assert collective.dtR_excited(m) == pytest.approx(dr, rel=1e-10, abs=1e-10 * r**2)
            assert collective.g2_zero(m) == pytest.approx(oracles.g2_from_jump_operators(m), rel=1e-10)


def test_sign_equivalence():
    rng = np.random.default_rng(12)
    for _ in range(1000):
        n = int(rng.integers(2, 13))
        m = _random_psd(rng, n, int(rng.integers(1, n + 1)))
        g2, dtr = collective.g2_zero(m), collective.dtR_excited(m)
        tr = np.trace(m).real
        assert (abs(g2 - 1) < 1e-12) == (abs(dtr) < 1e-12 * tr**2)
        assert np.sign(g2 - 1) == np.sign(dtr)


def test_permutation_invariance():
    rng = np.random.default_rng(13)
    m = _random_psd(rng, 8)
    ref = collective.dtR_excited(m)
    for _ in range(50):
        perm = rng.permutation(8)
        assert collective.dtR_excited(m[np.ix_(perm, perm)]) == pytest.approx(ref, rel=1e-12)


def test_two_dipole_coherent(p):
    a = 3 * p.lambda_f
    mat = decay.build_matrix(DipoleEnsemble([[0, 0], [0, a]]), p)
    g0, ga = decay.gamma_r(p, 0.0), decay.gamma_r(p, a)
    assert collective.R_coherent(mat) == pytest.approx(g0 + ga, rel=1e-7)


def test_coherent_rate_nonnegative(p):
    rng = np.random.default_rng(14)
    for _ in range(5):
        pos = rng.uniform(0, 30 * p.lambda_f, size=(40, 2))
        assert collective.R_coherent(decay.build_matrix(DipoleEnsemble(pos), p)) >= 0


def test_lambda_sr_oracles(p):
    qmax = 3.0
    top = collective.correlation_length(lambda q: 2.0, [0.0, qmax])
    assert top == pytest.approx(2 / qmax, rel=5e-3)
    lo, hi = p.delta / p.v_f, 2 * p.k_f
    inv = collective.correlation_length(lambda q: 1.0 / q, [lo, hi])
    assert inv**2 == pytest.approx(collective.inverse_q_lambda_sq(lo, hi), rel=5e-3)
    assert collective.inverse_q_lambda_sq(lo, hi) == pytest.approx(
        collective.inverse_q_lambda_sq_asymptotic(p), rel=1e-4)
    with pytest.raises(ValidationError):
        collective.inverse_q_lambda_sq(2.0, 1.0)
    with pytest.raises(ZeroDivisionError):
        collective.correlation_length(lambda q: 0.0 * q, [0.0, 1.0])


def test_lambda_sr_prime():
    base = default_params()
    # lambda_F = 1e-8 cm, v_F = 1e8 cm/s, Delta = 2 pi GHz
    kf = 1e8
    p = base.replace(mass=HBAR * kf / 1e8, delta=2 * math.pi * 1e9)
    assert p.lambda_f == pytest.approx(1e-8)
    val = collective.lambda_SR_prime(p)
    assert val == pytest.approx(math.sqrt(1e-8 * 1e8 / (2 * math.pi * 1e9)), rel=1e-12)
    assert 1e-5 < val < 1e-4
    at = collective.lambda_SR_prime(p.replace(d=p.lambda_f))
    below = collective.lambda_SR_prime(p.replace(d=p.lambda_f * (1 - 1e-12)))
    assert at == pytest.approx(below, rel=1e-9)
    assert collective.lambda_SR_prime(p.replace(delta=4 * p.delta)) == pytest.approx(val / 2)


def test_dtR_homogeneous(p):
    g0, lam = 2.0, 3e-8
    assert collective.dtR_homogeneous(p, 1 / (math.pi * lam**2), 10, g0, lam) == pytest.approx(0, abs=1e-12)
    assert collective.dtR_homogeneous(p, 0.0, 10, g0, lam) == pytest.approx(-10 * g0**2)
    with pytest.raises(ValidationError):
        collective.dtR_homogeneous(p, -1.0, 10, g0, lam)


def test_dtR_ensemble_vs_formula(p):
    q = p.replace(delta=0.5 * p.e_f / HBAR)
    lam, g0 = collective.lambda_SR(q), decay.gamma_r(q, 0.0)
    N, n = 100, 3 / (math.pi * lam**2)
    side = math.sqrt(N / n)
    vals = []
    for seed in range(20):
        pos = np.random.default_rng(seed).uniform(0, side, size=(N, 2))
        vals.append(collective.dtR_excited(decay.build_matrix(DipoleEnsemble(pos), q)))
    assert min(vals) > 0
    assert np.mean(vals) == pytest.approx(collective.dtR_homogeneous(q, n, N, g0, lam), rel=0.4)


def test_area_scaling_formula(p):
    r0, N, g0 = 1.0, 50, 1.0
    one = collective.R_area_scaling(p, 1.0, r0, 100.0, 0.1, N, g0)
    assert collective.R_area_scaling(p, 1.0, r0, 400.0, 0.1, N, g0) == pytest.approx(2 * one)
    assert collective.R_area_scaling(p, 3.0, r0, 100.0, 0.1, N, g0) == pytest.approx(N * g0 / 2)
    assert collective.R_area_scaling(p, 2.0, r0, 100.0, 0.1, N, g0) == pytest.approx(N * g0 / 2)
    with pytest.raises(ValidationError):
        collective.R_area_scaling(p, 1.0, r0, 0.5, 0.1, N, g0)


@pytest.mark.parametrize("A", [400.0, 800.0, 1600.0])
def test_area_scaling_direct_sum(p, A):
    # N dipoles uniform in a disc of radius sqrt(A) with gamma(r) = g0 min(1, r0/r)
    N, r0, g0 = 200, 1.0, 1.0
    out = []
    for seed in range(5):
        rng = np.random.default_rng(seed)
        rad = math.sqrt(A) * np.sqrt(rng.uniform(size=N))
        th = rng.uniform(0, 2 * np.pi, N)
        pos = np.c_[rad * np.cos(th), rad * np.sin(th)]
        dist = np.linalg.norm(pos[:, None] - pos[None], axis=-1)
        with np.errstate(divide="ignore"):
            m = g0 * np.minimum(1.0, r0 / dist)
        out.append(collective.R_coherent(m))
    formula = collective.R_area_scaling(p, 1.0, r0, A, N / (math.pi * A), N, g0)
    assert np.mean(out) == pytest.approx(formula, rel=0.15)


def test_report(p):
    m = np.ones((3, 3))
    rep = collective.superradiance_report(m, p, n=1.0, lambda_sr=1e-7)
    assert rep.dtR == pytest.approx(3.0) and rep.g2_zero == pytest.approx(4 / 3)
    assert np.sign(rep.g2_zero - 1) == np.sign(rep.dtR)


def test_macrospin_exact_values():
    N, g0, dl = 20, 1.0, 100.0
    tr = collective.macrospin_exact(N, g0, dl, np.array([0.0, 1e3]))
    assert (tr.sx[0], tr.sy[0], tr.sz[0]) == pytest.approx((10.0, 0.0, 0.0))
    assert (tr.sx[1], tr.sy[1], tr.sz[1]) == pytest.approx((0.0, 0.0, -10.0), abs=1e-12)
    t = np.linspace(0, 1, 1000)
    tr = collective.macrospin_exact(N, g0, dl, t)
    assert np.allclose(tr.norm(), N / 2, rtol=1e-10)
    assert collective.ll_residual(tr) <= 1e-9
    rot = tr.rotating_frame()
    assert np.allclose(rot.sy, 0.0, atol=1e-12)


@pytest.mark.parametrize("N,ratio", [(20, 100.0), (100, 1000.0)])
def test_macrospin_ode(N, ratio):
    g0 = 1.0
    t = np.linspace(0, 10 / (N * g0), 2001)
    ex = collective.macrospin_exact(N, g0, ratio * g0, t)
    ode = collective.macrospin_ode(N, g0, ratio * g0, t)
    for a, b in ((ex.sx, ode.sx), (ex.sy, ode.sy), (ex.sz, ode.sz)):
        assert np.max(np.abs(a - b)) <= 1e-6 * N
    assert np.max(np.abs(ode.norm() - N / 2)) <= 1e-9 * N


def test_macrospin_no_precession():
    ode = collective.macrospin_ode(10, 1.0, 0.0, np.linspace(0, 1, 50))
    assert np.all(ode.sy == 0.0)


def test_macrospin_validation():
    with pytest.raises(ValidationError):
        collective.macrospin_exact(0, 1.0, 1.0, [0.0])
    with pytest.raises(ValidationError):
        collective.macrospin_exact(2, -1.0, 1.0, [0.0])
    with pytest.raises(ValidationError):
        collective.macrospin_ode(2, 1.0, 1.0, [0.0, 1.0, 0.5])


def test_macrospin_ode_fast_precession():
    N, g0, dl = 20, 1.0, 1e8
    t = np.linspace(0, 10 / (N * g0), 301)
    ex = collective.macrospin_exact(N, g0, dl, t)
    ode = collective.macrospin_ode(N, g0, dl, t)
    for a, b in ((ex.sx, ode.sx), (ex.sy, ode.sy), (ex.sz, ode.sz)):
        assert np.max(np.abs(a - b)) <= 1e-6 * N

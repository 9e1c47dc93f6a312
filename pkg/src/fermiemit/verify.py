"""Cross-module consistency checks behind ``fermiemit verify``."""

from dataclasses import dataclass
import math

import numpy as np

from . import collective, noise, response
from .config import default_params


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    target: float
    tolerance: float
    passed: bool

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<28s} value={self.value:.6e}  target={self.target:.6e}  tol={self.tolerance:.1e}"


def _check(name, value, target, tol, relative=True):
    scale = abs(target) if relative and target != 0 else 1.0
    ok = bool(np.isfinite(value)) and abs(value - target) <= tol * scale
    return CheckResult(name, float(value), float(target), tol, ok)


def check_fdt(params, spin_degeneracy=2, points=200):
    """Max relative mismatch between the response-side and noise-side spectra."""
    rng = np.random.default_rng(12345)
    kf, wf = params.k_f, params.e_f / response.HBAR
    worst = 0.0
    checked = 0
    while checked < points:
        q = rng.uniform(1e-3, 3.0) * kf
        w = rng.uniform(1e-4, 2.0) * wf
        direct = noise.oersted_noise(params, w, q, spin_degeneracy=spin_degeneracy)
        implied = float(response.fdt_noise(params, q, w))
        if direct == 0 and implied == 0:
            continue
        worst = max(worst, abs(implied - direct) / max(abs(direct), abs(implied)))
        checked += 1
    return _check("FDT noise vs Im G", worst, 0.0, 1e-6, relative=False)


def check_kramers_kronig():
    x = np.array([-2.5, -1.2, -0.8, -0.3, 0.1, 0.55, 0.95, 1.05, 3.0])
    err = np.max(np.abs(response.kramers_kronig_real(x) - np.real(response.g_complex(x))))
    return _check("Kramers-Kronig Re g", err, 0.0, 1e-3, relative=False)


def _random_psd(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    # a small random rank makes both signs of g2 - 1 common
    rank = rng.integers(1, n + 1)
    v = a[:, :rank]
    return v @ v.conj().T


def check_g2_dtR(samples=1000):
    rng = np.random.default_rng(2024)
    mismatches = 0
    for _ in range(samples):
        m = _random_psd(rng, int(rng.integers(2, 9)))
        trace = float(np.real(np.trace(m)))
        g2 = collective.g2_zero(m)
        dtr = collective.dtR_excited(m)
        # dR/dt = R^2 (g2 - 1) for the fully excited state
        if not math.isclose(dtr, trace**2 * (g2 - 1.0), rel_tol=1e-10, abs_tol=1e-10 * trace**2):
            mismatches += 1
    return _check("g2 <-> dtR identity", mismatches, 0, 0, relative=False)


def check_dicke(n_max=12):
    worst = 0.0
    for N in range(2, n_max + 1):
        const = np.ones((N, N))
        diag = np.eye(N)
        pairs = [(collective.dtR_excited(const), N * (N - 2.0)), (collective.g2_zero(const), 2.0 * (N - 1) / N),
                 (collective.dtR_excited(diag), -float(N)), (collective.g2_zero(diag), 1.0 - 1.0 / N)]
        for got, want in pairs:
            worst = max(worst, abs(got - want) / abs(want) if want else abs(got))
    return _check("Dicke and independent limits", worst, 0.0, 1e-12, relative=False)


def check_macrospin(N=20, ratio=100.0):
    g0 = 1.0
    t = np.linspace(0.0, 10.0 / (N * g0), 801)
    exact = collective.macrospin_exact(N, g0, ratio * g0, t)
    ode = collective.macrospin_ode(N, g0, ratio * g0, t)
    err = max(np.max(np.abs(a - b)) for a, b in ((exact.sx, ode.sx), (exact.sy, ode.sy), (exact.sz, ode.sz)))
    return _check("macrospin ODE vs exact / N", err / N, 0.0, 1e-6, relative=False)


def check_landau(params):
    value, _ = response.landau_chi(params)
    return _check("Landau limit", value, response.landau_chi_closed_form(params), 1e-3)


def run_verify(params=None, spin_degeneracy=2):
    """Run every check; ``spin_degeneracy != 2`` is a deliberate corruption of the noise side."""
    params = default_params() if params is None else params
    return [
        check_fdt(params, spin_degeneracy=spin_degeneracy),
        check_kramers_kronig(),
        check_g2_dtR(),
        check_dicke(),
        check_macrospin(),
        check_landau(params),
    ]

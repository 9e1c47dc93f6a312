"""Nonlocal decay-rate matrix of dipoles above a 2D electron gas.

For z-aligned dipoles the matrix only depends on the separation,

    gamma(r) = (gamma_e / 2)^2 int q dq / 2 pi  J0(q r) C^{-+}(Delta, q),

and for general orientations the azimuthal dependence of the orientation
factor is expanded in harmonics ``e^{i m phi}``, ``|m| <= 2``, which turns the
angular integral into Hankel transforms of order ``|m|``.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import logging
import math
import os

import numpy as np
from scipy.interpolate import make_interp_spline
from scipy.linalg import expm

from .errors import ConvergenceError, ValidationError
from .noise import OrientationPair, oersted_noise, orientation_harmonics, support_edges
from .numerics import (DEFAULT_SPEC, QuadratureSpec, SeededStream, bessel_j, hermitian_eigen,
                       integrate_hankel_damped, integrate_panels, panel_nodes, uniform_points)
from .units import DipoleEnsemble

log = logging.getLogger(__name__)

# eigenvalues in [-PSD_TOL * gamma0, 0) are clamped to zero
PSD_TOL = 1e-8


def _radial_density(params):
    """``q -> q C^{-+}(Delta, q) / 2 pi`` and its initial quadrature edges."""
    edges = support_edges(params, params.delta)

    def f(q):
        return q / (2.0 * math.pi) * oersted_noise(params, params.delta, q)

    return f, edges


def rate_scale(params):
    """``(gamma_e / 2)^2`` with the projection-dependent gyromagnetic ratio."""
    return 0.25 * params.decay_gyro**2


def gamma_r(params, r, spec=DEFAULT_SPEC, order=0):
    """Radial decay-rate profile (rad/s) at separation ``r`` (cm) by direct quadrature.

    ``order`` selects the Bessel order of the transform (0 for z-aligned
    dipoles; 1 and 2 enter the harmonics of tilted orientations).
    """
    if not (math.isfinite(r) and r >= 0):
        raise ValidationError("r must be finite and non-negative", field="r")
    f, edges = _radial_density(params)
    try:
        value, _ = integrate_hankel_damped(f, order, r, 0.0, edges[-1], spec, q_min=edges[0],
                                           breakpoints=edges[1:-1])
    except ConvergenceError as exc:
        exc.diagnostics.update({"r": r, "delta": params.delta})
        raise
    return rate_scale(params) * value


class RadialProfile:
    """Tabulated Hankel transforms of the noise on ``[0, r_max]``.

    One set of quadrature nodes, refined on the (non-oscillatory) noise
    density and capped at a quarter period of ``J_n(q r_max)``, serves every
    table point, so the table is a single matrix product. A quintic spline on a
    uniform grid (spacing ``lambda_F / points_per_lambda``) interpolates it.
    """

    def __init__(self, params, r_max, orders=(0,), points_per_lambda=16, spec=None, chunk=256):
        if not r_max > 0:
            raise ValidationError("r_max must be positive", field="r_max")
        self.params = params
        self.orders = tuple(sorted(set(orders)))
        spec = spec or QuadratureSpec(rel_tol=1e-11, max_subdivisions=20000)
        f, edges = _radial_density(params)
        lo, hi = edges[0], edges[-1]
        width = 0.5 * math.pi / r_max
        n_uniform = max(1, int(math.ceil((hi - lo) / width)))
        edges = np.concatenate([np.linspace(lo, hi, n_uniform + 1), edges])
        _, _, (pa, pb) = integrate_panels(f, edges, spec, return_panels=True)
        nodes, weights = panel_nodes(pa, pb)
        fw = weights * f(nodes) * rate_scale(params)

        step = params.lambda_f / points_per_lambda
        n_r = int(math.ceil(r_max / step)) + 4
        self.r = np.arange(n_r) * step
        self.r_max = float(self.r[-1])
        self._splines = {}
        self.values = {}
        for n in self.orders:
            table = np.empty(n_r)
            for start in range(0, n_r, chunk):
                rr = self.r[start:start + chunk]
                table[start:start + chunk] = bessel_j(n, np.multiply.outer(rr, nodes)) @ fw
            self.values[n] = table
            # mirror a few points through r = 0 using the parity of J_n so the
            # quintic spline sees the function as smooth at the origin
            parity = 1.0 if n % 2 == 0 else -1.0
            r_ext = np.concatenate([-self.r[5:0:-1], self.r])
            t_ext = np.concatenate([parity * table[5:0:-1], table])
            self._splines[n] = make_interp_spline(r_ext, t_ext, k=5)
        self.gamma0 = float(self.values[0][0]) if 0 in self.values else None

    def __call__(self, r, order=0):
        r = np.asarray(r, dtype=float)
        if np.any(r > self.r_max) or np.any(r < 0):
            raise ValidationError(f"r outside tabulated range [0, {self.r_max}]", field="r")
        if order not in self._splines:
            raise ValidationError(f"order {order} not tabulated", field="order")
        out = self._splines[order](r)
        if order == 0:
            out = np.where(r == 0, self.gamma0, out)
        return out


@dataclass
class DecayMatrix:
    """Hermitian decay-rate matrix (rad/s) and, once computed, its spectrum."""

    rates: np.ndarray
    gamma0: float
    spectrum: np.ndarray = None
    vectors: np.ndarray = None
    clamped: int = 0

    def __post_init__(self):
        m = np.asarray(self.rates)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError("rates must be square", field="rates")
        self.rates = m

    def __len__(self):
        return self.rates.shape[0]

    def eigen(self, psd_tol=PSD_TOL):
        """Ascending eigenvalues and eigenvectors, clamping round-off negatives."""
        values, vectors = hermitian_eigen(self.rates)
        floor = -psd_tol * self.gamma0
        if values[0] < floor:
            raise ConvergenceError(
                f"decay matrix has eigenvalue {values[0]:.3e} below -{psd_tol:g} gamma0",
                estimate=values[0], diagnostics={"gamma0": self.gamma0},
            )
        neg = values < 0
        self.clamped = int(neg.sum())
        if self.clamped:
            log.info("clamped %d slightly negative eigenvalues to zero", self.clamped)
        values = np.where(neg, 0.0, values)
        self.spectrum, self.vectors = values, vectors
        return values, vectors

    def participation_ratios(self):
        """Inverse participation ``1 / sum |v_i|^4`` of each eigenvector."""
        if self.vectors is None:
            self.eigen()
        return 1.0 / np.sum(np.abs(self.vectors) ** 4, axis=0)


def _pair_distances(positions):
    diff = positions[:, None, :] - positions[None, :, :]
    return diff, np.hypot(diff[..., 0], diff[..., 1])


def build_matrix(ensemble, params, profile=None):
    """Decay-rate matrix ``gamma_nm`` of ``ensemble``.

    Uses ``profile`` when it covers every separation, otherwise tabulates a
    new one. Returns a :class:`DecayMatrix`.
    """
    if not isinstance(ensemble, DipoleEnsemble):
        ensemble = DipoleEnsemble(ensemble)
    diff, dist = _pair_distances(ensemble.positions)
    aligned = ensemble.normal_aligned
    orders = (0,) if aligned else (0, 1, 2)
    r_need = float(dist.max())
    if profile is None or profile.r_max < r_need or not set(orders) <= set(profile.orders):
        profile = RadialProfile(params, max(r_need, params.lambda_f) * 1.05, orders=orders)
    if aligned:
        rates = profile(dist)
        return DecayMatrix(rates, profile.gamma0)

    n = len(ensemble)
    phi = np.arctan2(diff[..., 1], diff[..., 0])
    hankel = {m: profile(dist, m) for m in (0, 1, 2)}
    rates = np.zeros((n, n), dtype=complex)
    tri = ensemble.orientations
    for i in range(n):
        for j in range(n):
            c = orientation_harmonics(OrientationPair(tri[i], tri[j]))
            rates[i, j] = sum(c[m] * 1j ** abs(m) * np.exp(1j * m * phi[i, j]) * hankel[abs(m)][i, j]
                              for m in range(-2, 3))
    rates = 0.5 * (rates + rates.conj().T)
    gamma0 = float(np.mean(np.real(np.diag(rates))))
    return DecayMatrix(rates, gamma0)


@dataclass(frozen=True)
class SubradianceStats:
    """Disorder-averaged single-excitation statistics at one spacing ``a``."""

    spacing: float
    mean_min_rate: float
    dark_fraction: float
    realizations: int
    threshold: float
    min_rate_std: float = 0.0
    dark_fraction_std: float = 0.0


_WORKER = {}


def _init_worker(params, profile):
    _WORKER["params"] = params
    _WORKER["profile"] = profile


def _realization(task):
    seed, index, n, side, threshold = task
    params, profile = _WORKER["params"], _WORKER["profile"]
    try:
        pos = uniform_points(SeededStream(seed, index), n, side)
        mat = build_matrix(DipoleEnsemble(pos), params, profile)
        values = np.linalg.eigvalsh(mat.rates)
        floor = -PSD_TOL * mat.gamma0
        if values[0] < floor:
            raise ConvergenceError(f"eigenvalue {values[0]:.3e} below -{PSD_TOL:g} gamma0",
                                   estimate=values[0])
        values = np.maximum(values, 0.0)
    except Exception as exc:
        raise RuntimeError(f"realization {index} failed: {exc}") from exc
    g0 = mat.gamma0
    return index, values[0] / g0, float(np.mean(values < threshold * g0))


def disorder_sweep(params, n, spacings, realizations, threshold=0.1, seed=0, workers=1):
    """Subradiance statistics versus spacing ``a`` (in units of lambda_F).

    ``n`` uniform points in a square of side ``sqrt(n) a`` (density ``a^-2``).
    Stream index ``i * realizations + k`` seeds realization ``k`` of spacing
    ``i``, so results do not depend on ``workers``.
    """
    if n < 2:
        raise ValidationError("need N >= 2", field="N")
    if realizations < 1:
        raise ValidationError("need at least one realization", field="realizations")
    spacings = [float(a) for a in spacings]
    sides = [math.sqrt(n) * a * params.lambda_f for a in spacings]
    profile = RadialProfile(params, math.sqrt(2.0) * max(sides) * 1.02)
    tasks = [(seed, i * realizations + k, n, side, threshold)
             for i, side in enumerate(sides) for k in range(realizations)]
    workers = max(1, min(int(workers), os.cpu_count() or 1))
    if workers == 1:
        _init_worker(params, profile)
        results = [_realization(t) for t in tasks]
    else:
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(params, profile)) as pool:
            results = list(pool.map(_realization, tasks, chunksize=1))
    by_index = {idx: (gmin, frac) for idx, gmin, frac in results}
    out = []
    for i, a in enumerate(spacings):
        vals = np.array([by_index[i * realizations + k] for k in range(realizations)])
        mins, fracs = vals[:, 0], vals[:, 1]
        out.append(SubradianceStats(
            spacing=a,
            mean_min_rate=math.fsum(mins) / realizations,
            dark_fraction=math.fsum(fracs) / realizations,
            realizations=realizations,
            threshold=threshold,
            min_rate_std=float(np.std(mins, ddof=1)) if realizations > 1 else 0.0,
            dark_fraction_std=float(np.std(fracs, ddof=1)) if realizations > 1 else 0.0,
        ))
    return out


def single_excitation_evolve(matrix, psi0, t):
    """Single-excitation amplitudes ``psi(t) = exp(-M^T t / 2) psi0`` and ``P1(t)``.

    ``t`` may be a scalar or 1-D array; the amplitudes then have shape
    ``(len(t), N)``.
    """
    m = matrix.rates if isinstance(matrix, DecayMatrix) else np.asarray(matrix)
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (m.shape[0],):
        raise ValidationError("psi0 length must match the matrix", field="psi0")
    norm = np.linalg.norm(psi0)
    if abs(norm - 1.0) > 1e-10:
        raise ValidationError("psi0 must be normalised", field="psi0")
    values, vectors = hermitian_eigen(m)
    # M^T = conj(V) diag(values) V^T
    coeff = vectors.T @ psi0
    times = np.atleast_1d(np.asarray(t, dtype=float))
    psi = (np.exp(-0.5 * np.outer(times, values)) * coeff) @ vectors.conj().T
    p1 = np.sum(np.abs(psi) ** 2, axis=1)
    if np.ndim(t) == 0:
        return psi[0], float(p1[0])
    return psi, p1


def propagator(matrix, t):
    """Dense ``exp(-M^T t / 2)`` by scaling and squaring (reference path)."""
    m = matrix.rates if isinstance(matrix, DecayMatrix) else np.asarray(matrix)
    return expm(-0.5 * m.T * t)

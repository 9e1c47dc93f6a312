"""Superradiance diagnostics and the mean-field macrospin.

The diagnostics act on a decay-rate matrix ``gamma_nm`` (any Hermitian PSD
array or :class:`~fermiemit.decay.DecayMatrix`) for the fully excited or
the x-polarised product state. Rates are in rad/s.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.integrate import solve_ivp

from .decay import DecayMatrix, gamma_r
from .errors import ValidationError
from .noise import oersted_noise, support_edges
from .numerics import DEFAULT_SPEC, integrate_panels


def _rates(matrix):
    m = matrix.rates if isinstance(matrix, DecayMatrix) else np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError("decay matrix must be square", field="M")
    return m


def dtR_excited(matrix):
    """Initial rate of change of the total emission rate, fully excited state.

    ``dR/dt = sum_{n != m} gamma_nm gamma_mn - sum_n gamma_nn^2``.
    """
    m = _rates(matrix)
    diag = np.real(np.diag(m))
    pair = np.real(m * m.T)
    off = math.fsum(pair.ravel()) - math.fsum(np.real(np.diag(pair)))
    return off - math.fsum(diag**2)


def g2_zero(matrix):
    """Equal-time second-order correlation of the emitted quanta, fully excited state."""
    m = _rates(matrix)
    diag = np.real(np.diag(m))
    total = math.fsum(diag)
    if total == 0:
        raise ZeroDivisionError("g2 is undefined for a matrix with zero trace")
    pair = np.real(np.outer(diag, diag) + m * m.T)
    numerator = math.fsum(pair.ravel()) - math.fsum(np.diag(pair))
    return numerator / total**2


def R_coherent(matrix):
    """Emission rate of the x-polarised product state, ``(sum_k g_kk + sum_{n != m} g_nm) / 2``."""
    m = _rates(matrix)
    diag = np.real(np.diag(m))
    offdiag = math.fsum(np.real(m).ravel()) - math.fsum(diag)
    return 0.5 * (math.fsum(diag) + offdiag)


# --------------------------------------------------------------------------
# correlation lengths

def correlation_length(noise, edges, spec=DEFAULT_SPEC):
    """``lambda`` with ``pi lambda^2 = int q dq C^2 / 2 pi / (int q dq C / 2 pi)^2``.

    ``noise`` is an isotropic spectrum ``C(q)`` supported on ``[edges[0],
    edges[-1]]``; interior entries of ``edges`` mark kinks.
    """
    def first(q):
        return q * noise(q) / (2.0 * math.pi)

    def second(q):
        return q * noise(q) ** 2 / (2.0 * math.pi)

    local, _ = integrate_panels(first, edges, spec)
    if local == 0:
        raise ZeroDivisionError("local noise density vanishes")
    square, _ = integrate_panels(second, edges, spec)
    return math.sqrt(square / (math.pi * local**2))


def lambda_SR(params, spec=DEFAULT_SPEC):
    """Correlated-emission length (cm) of the transverse-current noise at ``Delta``."""
    edges = support_edges(params, params.delta)
    return correlation_length(lambda q: oersted_noise(params, params.delta, q), edges, spec)


def inverse_q_lambda_sq(q_lo, q_hi):
    """Exact ``lambda^2`` for noise ``proportional to 1/q`` on ``(q_lo, q_hi)``."""
    if not 0 < q_lo < q_hi:
        raise ValidationError("need 0 < q_lo < q_hi", field="q")
    return 2.0 * math.log(q_hi / q_lo) / (q_hi - q_lo) ** 2


def inverse_q_lambda_sq_asymptotic(params):
    """Small-``Delta`` form ``ln(4 E_F / hbar Delta) / (2 k_F^2)`` of :func:`inverse_q_lambda_sq`."""
    kf = params.k_f
    return math.log(2.0 * kf * params.v_f / params.delta) / (2.0 * kf**2)


def lambda_SR_prime(params):
    """Spacing below which the x-polarised state radiates faster than independent dipoles.

    ``sqrt(lambda_F v_F / Delta)`` for ``d < lambda_F``, else ``sqrt(d v_F / Delta)``.
    """
    scale = params.lambda_f if params.d < params.lambda_f else params.d
    return math.sqrt(scale * params.v_f / params.delta)


def _gamma0(params, gamma0):
    return gamma_r(params, 0.0) if gamma0 is None else gamma0


def dtR_homogeneous(params, n, N, gamma0=None, lambda_sr=None):
    """``N gamma0^2 (n pi lambda_SR^2 - 1)`` for a homogeneous cloud of density ``n``."""
    if n < 0:
        raise ValidationError("density must be non-negative", field="n")
    g0 = _gamma0(params, gamma0)
    lam = lambda_SR(params) if lambda_sr is None else lambda_sr
    return N * g0**2 * (n * math.pi * lam**2 - 1.0)


def R_area_scaling(params, alpha, r0, A, n, N, gamma0=None):
    """Coherent-state rate for ``gamma(r) ~ gamma0 (r0 / r)^alpha`` over area ``A``.

    ``N pi / (2 - alpha) n gamma0 A^{1 - alpha/2} r0^alpha`` for ``alpha < 2``;
    otherwise the independent value ``N gamma0 / 2``.
    """
    g0 = _gamma0(params, gamma0)
    if alpha >= 2:
        return 0.5 * N * g0
    if A <= r0**2:
        raise ValidationError("area must exceed r0^2", field="A")
    return N * math.pi / (2.0 - alpha) * n * g0 * A ** (1.0 - alpha / 2.0) * r0**alpha


@dataclass(frozen=True)
class SuperradianceReport:
    dtR: float
    g2_zero: float
    R_coherent: float
    lambda_SR: float
    lambda_SR_prime: float
    n: float


def superradiance_report(matrix, params, n, lambda_sr=None):
    return SuperradianceReport(
        dtR=dtR_excited(matrix), g2_zero=g2_zero(matrix), R_coherent=R_coherent(matrix),
        lambda_SR=lambda_SR(params) if lambda_sr is None else lambda_sr,
        lambda_SR_prime=lambda_SR_prime(params), n=n,
    )


# --------------------------------------------------------------------------
# macrospin

@dataclass(frozen=True)
class MacrospinTrajectory:
    """Collective spin ``<S>`` in units of hbar, lab frame unless noted."""

    times: np.ndarray
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    N: int
    gamma0: float
    delta: float

    def norm(self):
        return np.sqrt(self.sx**2 + self.sy**2 + self.sz**2)

    def rotating_frame(self):
        """The same trajectory with the precession ``Delta t`` removed."""
        c, s = np.cos(self.delta * self.times), np.sin(self.delta * self.times)
        sx = c * self.sx - s * self.sy
        sy = s * self.sx + c * self.sy
        return MacrospinTrajectory(self.times, sx, sy, self.sz, self.N, self.gamma0, 0.0)


# lab-frame integration is used while Delta t_end stays below this many radians
MAX_LAB_PHASE = 1e4


def _sech(x):
    e = np.exp(-np.abs(x))
    return 2.0 * e / (1.0 + e * e)


def _check_macrospin(N, gamma0, t_grid):
    if N < 1:
        raise ValidationError("N must be >= 1", field="N")
    if not gamma0 > 0:
        raise ValidationError("gamma0 must be positive", field="gamma0")
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or not np.all(np.isfinite(t)):
        raise ValidationError("t_grid must be a finite 1-D array", field="t_grid")
    return t


def macrospin_exact(N, gamma0, delta, t_grid):
    """Closed-form Landau-Lifshitz decay of N co-located dipoles from the x-polarised state."""
    t = _check_macrospin(N, gamma0, t_grid)
    half = 0.5 * N
    arg = 0.5 * N * gamma0 * t
    sech = _sech(arg)
    return MacrospinTrajectory(t, half * np.cos(delta * t) * sech, -half * np.sin(delta * t) * sech,
                               -half * np.tanh(arg), N, gamma0, delta)


def _ll_rhs(N, gamma0, delta):
    rate = 0.5 * N * gamma0

    def rhs(t, s):
        x, y, z = s
        # -Delta z x S - (N gamma0 / 2) s x (z x s) in units of N/2
        return np.array([delta * y + rate * x * z,
                         -delta * x + rate * y * z,
                         -rate * (x * x + y * y)])

    return rhs


def macrospin_ode(N, gamma0, delta, t_grid, rtol=1e-10, atol=1e-12):
    """Integrate ``dS/dt = -Delta z x S - gamma0 S x (z x S)`` with adaptive RK45."""
    t = _check_macrospin(N, gamma0, t_grid)
    if np.any(t < 0) or np.any(np.diff(t) <= 0):
        raise ValidationError("t_grid must be increasing and start at t >= 0", field="t_grid")
    # The damping term commutes with rotations about z, so when the precession
    # is too fast to resolve the equation is solved in the rotating frame and
    # the phase Delta t is applied afterwards.
    lab = abs(delta) * float(t[-1]) <= MAX_LAB_PHASE
    sol = solve_ivp(_ll_rhs(N, gamma0, delta if lab else 0.0), (0.0, float(t[-1])), [1.0, 0.0, 0.0],
                    method="RK45", t_eval=t, rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(f"macrospin integration failed: {sol.message}")
    half = 0.5 * N
    x, y, z = sol.y
    if not lab:
        c, s = np.cos(delta * t), np.sin(delta * t)
        x, y = c * x + s * y, c * y - s * x
    return MacrospinTrajectory(t, half * x, half * y, half * z, N, gamma0, delta)


def ll_residual(trajectory):
    """Max residual of the Landau-Lifshitz equation on the closed-form solution.

    Uses analytic time derivatives; the result is in units of ``N^2 gamma0 / 4``.
    """
    tr = trajectory
    N, g0, dl, t = tr.N, tr.gamma0, tr.delta, tr.times
    half = 0.5 * N
    arg = 0.5 * N * g0 * t
    sech, tanh = _sech(arg), np.tanh(arg)
    c, s = np.cos(dl * t), np.sin(dl * t)
    k = 0.5 * N * g0
    dsx = half * (-dl * s * sech - k * c * sech * tanh)
    dsy = half * (-dl * c * sech + k * s * sech * tanh)
    dsz = -half * k * sech**2
    sq = tr.sx**2 + tr.sy**2 + tr.sz**2
    rx = dl * tr.sy - g0 * (-tr.sx * tr.sz)
    ry = -dl * tr.sx - g0 * (-tr.sy * tr.sz)
    rz = -g0 * (sq - tr.sz**2)
    res = np.max(np.abs(np.stack([dsx - rx, dsy - ry, dsz - rz])))
    return res / (half**2 * g0)

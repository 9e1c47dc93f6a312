"""Numerical building blocks: Bessel functions, quadrature, eigensolver, FFT, RNG.

The Hankel-type integrals in this package all have compact support in q, so
``integrate_hankel_damped`` splits the interval at Bessel zeros and sums the
half-period panels exactly (``math.fsum``) instead of extrapolating a tail.
"""

from dataclasses import dataclass
from functools import lru_cache
import math
import warnings

import numpy as np
from scipy import integrate, special

from .errors import ConvergenceError, ValidationError


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-9
    abs_tol: float = 0.0
    max_subdivisions: int = 2000
    oscillation_splitting: bool = True

    def __post_init__(self):
        if not (0 < self.rel_tol <= 1e-2):
            raise ValidationError("rel_tol must lie in (0, 1e-2]", field="rel_tol")
        if self.abs_tol < 0:
            raise ValidationError("abs_tol must be >= 0", field="abs_tol")
        if self.max_subdivisions < 8:
            raise ValidationError("max_subdivisions must be >= 8", field="max_subdivisions")


DEFAULT_SPEC = QuadratureSpec()

# floor on the absolute tolerance, relative to the integral of |f|
_SCALE_FLOOR = 1e-14


# --------------------------------------------------------------------------
# Bessel functions

def bessel_j(n, x):
    """Bessel function of the first kind, orders 0, 1, 2, for ``x >= 0``."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise ValidationError("bessel_j is defined here for x >= 0 only", field="x")
    if n == 0:
        out = special.j0(x_arr)
    elif n == 1:
        out = special.j1(x_arr)
    elif n == 2:
        out = _j2(x_arr)
    else:
        raise ValidationError(f"order must be 0, 1 or 2, got {n!r}", field="n")
    return out if np.ndim(x) else float(out)


def _j2(x):
    # upward recurrence is stable for x > 2; the series branch covers the rest
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < 2.0
    xs = x[small]
    out[small] = special.jv(2, xs)
    xl = x[~small]
    out[~small] = 2.0 * special.j1(xl) / xl - special.j0(xl)
    return out


def bessel_zeros(n, x_max):
    """Positive zeros of J_n below ``x_max`` (McMahon expansion beyond the 64th)."""
    exact = _exact_zeros(n)
    if x_max <= exact[-1]:
        return exact[exact < x_max]
    count = int(x_max / math.pi) + 4
    s = np.arange(exact.size + 1, count + 1, dtype=float)
    beta = (s + 0.5 * n - 0.25) * math.pi
    mu = 4.0 * n * n
    tail = beta - (mu - 1) / (8 * beta) - 4 * (mu - 1) * (7 * mu - 31) / (3 * (8 * beta) ** 3)
    zeros = np.concatenate([exact, tail])
    return zeros[zeros < x_max]


@lru_cache(maxsize=None)
def _exact_zeros(n):
    return special.jn_zeros(n, 64)


# --------------------------------------------------------------------------
# Quadrature

def integrate_adaptive(f, a, b, spec=DEFAULT_SPEC, points=None):
    """Adaptive Gauss-Kronrod quadrature of a scalar function on ``[a, b]``.

    Returns ``(value, error_estimate)``. Raises ``ConvergenceError`` carrying
    the best estimate when the tolerance is not met.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValidationError("integration bounds must be finite", field="bounds")
    if not a < b:
        raise ValidationError("require a < b", field="bounds")
    probe = np.linspace(a, b, 9)
    scale = max(abs(float(f(t))) for t in probe) * (b - a)
    abs_tol = max(spec.abs_tol, _SCALE_FLOOR * scale)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err, info = integrate.quad(
            f, a, b, epsabs=abs_tol, epsrel=spec.rel_tol, limit=spec.max_subdivisions,
            points=points, full_output=1,
        )[:3]
    if not err <= max(abs_tol, spec.rel_tol * abs(value)):
        raise ConvergenceError(
            f"adaptive quadrature on [{a}, {b}] did not converge (err={err:.3e})",
            estimate=value, error=err, diagnostics={"subintervals": info.get("last")},
        )
    return value, err


@lru_cache(maxsize=None)
def _gauss_legendre(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _panel_rules(f, a, b):
    """20- and 10-point Gauss-Legendre estimates on each panel ``[a_i, b_i]``."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x20, w20 = _gauss_legendre(20)
    x10, w10 = _gauss_legendre(10)
    nodes = np.concatenate([x20, x10])
    vals = f(mid[:, None] + half[:, None] * nodes[None, :])
    vals = np.asarray(vals)
    i20 = half * (vals[:, :20] @ w20)
    i10 = half * (vals[:, 20:] @ w10)
    mag = half * (np.abs(vals[:, :20]) @ w20)
    return i20, i10, mag


def _fsum(values):
    values = np.asarray(values)
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real), math.fsum(values.imag))
    return math.fsum(values)


def integrate_panels(f, edges, spec=DEFAULT_SPEC, return_panels=False, floor=_SCALE_FLOOR):
    """Integrate a vectorised ``f`` over consecutive panels with adaptive bisection.

    ``edges`` is an increasing sequence; each panel gets a 20/10-point
    Gauss-Legendre pair and panels whose local error exceeds their share of
    the tolerance (proportional to width) are bisected. Returns
    ``(value, error_estimate)``; value may be complex. With
    ``return_panels=True`` the accepted panel bounds ``(a, b)`` are appended,
    so the same refinement can be reused through :func:`panel_nodes`.
    ``floor`` bounds the attainable accuracy relative to ``int |f|``.
    """
    edges = np.unique(np.asarray(edges, dtype=float))
    if edges.size < 2:
        empty = np.empty(0)
        return (0.0, 0.0, (empty, empty)) if return_panels else (0.0, 0.0)
    a, b = edges[:-1], edges[1:]
    total_width = edges[-1] - edges[0]
    i20, i10, mag = _panel_rules(f, a, b)
    estimate = _fsum(i20)
    abs_tol = max(spec.abs_tol, floor * math.fsum(mag))
    target = max(abs_tol, spec.rel_tol * abs(estimate))

    accepted_vals, accepted_errs, accepted_a, accepted_b = [], [], [], []
    splits = 0
    while True:
        err = np.abs(i20 - i10)
        ok = err <= target * (b - a) / total_width
        accepted_vals.append(i20[ok])
        accepted_errs.append(err[ok])
        accepted_a.append(a[ok])
        accepted_b.append(b[ok])
        if ok.all():
            break
        a, b = a[~ok], b[~ok]
        splits += a.size
        if splits > spec.max_subdivisions:
            value = _fsum(np.concatenate(accepted_vals + [i20[~ok]]))
            error = math.fsum(np.concatenate(accepted_errs + [err[~ok]]))
            raise ConvergenceError(
                f"panel quadrature exceeded {spec.max_subdivisions} subdivisions",
                estimate=value, error=error,
                diagnostics={"unconverged_panels": int(a.size), "worst_panel": (float(a[0]), float(b[0]))},
            )
        m = 0.5 * (a + b)
        a, b = np.concatenate([a, m]), np.concatenate([m, b])
        order = np.argsort(a, kind="stable")
        a, b = a[order], b[order]
        i20, i10, _ = _panel_rules(f, a, b)
    value = _fsum(np.concatenate(accepted_vals))
    error = math.fsum(np.concatenate(accepted_errs))
    if return_panels:
        pa, pb = np.concatenate(accepted_a), np.concatenate(accepted_b)
        order = np.argsort(pa)
        return value, error, (pa[order], pb[order])
    return value, error


def panel_nodes(a, b, order=20):
    """Flattened Gauss-Legendre nodes and weights on panels ``[a_i, b_i]``."""
    x, w = _gauss_legendre(order)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)[:, None]
    nodes = 0.5 * (a + b)[:, None] + half * x[None, :]
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def hankel_edges(n, r, q_min, q_max, breakpoints=(), spec=DEFAULT_SPEC):
    """Panel edges on ``[q_min, q_max]``: breakpoints plus zeros of ``J_n(q r)``."""
    edges = [q_min, q_max]
    edges.extend(p for p in breakpoints if q_min < p < q_max)
    if spec.oscillation_splitting and r * q_max > 10:
        z = bessel_zeros(n, r * q_max) / r
        edges.extend(z[z > q_min])
    return np.unique(np.asarray(edges, dtype=float))


def integrate_hankel_damped(g, n, r, damping, q_max, spec=DEFAULT_SPEC, q_min=0.0, breakpoints=()):
    """``int_{q_min}^{q_max} g(q) J_n(q r) exp(-q damping) dq`` for vectorised ``g``.

    Returns ``(value, error_estimate)``. When ``r q_max > 10`` and oscillation
    splitting is enabled the interval is cut at consecutive zeros of
    ``J_n(q r)``; the half-period contributions are summed exactly. The
    absolute tolerance never drops below ``16 eps r q_max int |integrand|``,
    the rounding floor of the Bessel argument.
    """
    if not (math.isfinite(q_max) and q_max > q_min >= 0):
        raise ValidationError("need finite 0 <= q_min < q_max", field="q_max")
    if r < 0 or damping < 0:
        raise ValidationError("r and damping must be non-negative", field="r")

    def integrand(q):
        out = g(q) * bessel_j(n, q * r)
        if damping:
            out = out * np.exp(-q * damping)
        return out

    edges = hankel_edges(n, r, q_min, q_max, breakpoints, spec)
    # J_n(q r) carries a phase error ~ eps * q r from rounding its argument,
    # which caps the accuracy of strongly cancelling oscillatory sums
    floor = max(_SCALE_FLOOR, 16 * np.finfo(float).eps * r * q_max)
    try:
        return integrate_panels(integrand, edges, spec, floor=floor)
    except ConvergenceError as exc:
        exc.diagnostics.update({"r": r, "n": n, "panels": int(edges.size - 1)})
        raise


def richardson(f, h0, ratio=0.5, levels=6, order=2):
    """Richardson-extrapolate ``f(h)`` to ``h -> 0`` for an error series in powers of ``h^order``.

    Returns ``(value, error_estimate, tableau_diagonal)``.
    """
    hs = [h0 * ratio**k for k in range(levels)]
    table = [[f(h)] for h in hs]
    for k in range(1, levels):
        for j in range(1, k + 1):
            factor = (hs[k - j] / hs[k]) ** order
            prev = table[k][j - 1]
            table[k].append(prev + (prev - table[k - 1][j - 1]) / (factor - 1))
    diag = [row[-1] for row in table]
    return diag[-1], abs(diag[-1] - diag[-2]), diag


# --------------------------------------------------------------------------
# Linear algebra

def hermitian_eigen(matrix, tol=1e-10):
    """Ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix."""
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError("matrix must be square", field="matrix")
    scale = np.max(np.abs(m)) if m.size else 0.0
    if np.max(np.abs(m - m.conj().T), initial=0.0) > tol * max(scale, np.finfo(float).tiny):
        raise ValidationError("matrix is not Hermitian within tolerance", field="matrix")
    sym = 0.5 * (m + m.conj().T)
    values, vectors = np.linalg.eigh(sym)
    return values, vectors


# --------------------------------------------------------------------------
# FFT with the exp(+i w t) forward convention

def _check_pow2(n):
    if n < 1 or n & (n - 1):
        raise ValidationError(f"FFT length must be a power of two, got {n}", field="samples")


def fft_forward(samples):
    """``X_k = sum_j x_j exp(+2 pi i j k / n)`` (no normalisation)."""
    x = np.asarray(samples, dtype=complex)
    _check_pow2(x.shape[-1])
    return np.fft.ifft(x, axis=-1) * x.shape[-1]


def fft_inverse(spectrum):
    """Inverse of :func:`fft_forward`."""
    x = np.asarray(spectrum, dtype=complex)
    _check_pow2(x.shape[-1])
    return np.fft.fft(x, axis=-1) / x.shape[-1]


# --------------------------------------------------------------------------
# Randomness

@dataclass(frozen=True)
class SeededStream:
    """Counter-based random stream keyed by ``(master_seed, stream_index)``."""

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not (0 <= self.master_seed < 2**64):
            raise ValidationError("master_seed must be a 64-bit unsigned integer", field="seed")
        if self.stream_index < 0:
            raise ValidationError("stream_index must be >= 0", field="stream_index")

    def generator(self):
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.Philox(seq))


def uniform_points(stream, n, side):
    """``n`` i.i.d. uniform points in ``[0, side]^2``."""
    if n < 1:
        raise ValidationError("need at least one point", field="N")
    if not side > 0:
        raise ValidationError("side must be positive", field="side")
    return stream.generator().uniform(0.0, side, size=(n, 2))

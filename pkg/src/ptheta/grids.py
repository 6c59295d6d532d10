"""Vectorized evaluation on point grids.

The scalar evaluators in `core` carry per-call truncation contracts; the
functions here reproduce the same truncation rules over numpy arrays so
that contour sampling (thousands of circle points) and seed-grid Newton
iterations (thousands of simultaneous unknowns) stay fast.  Agreement
between the two routes is itself checked by the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DomainError,
    OverflowRiskError,
    as_q,
    peak_term_log,
    _SAFE_EXP,
)

__all__ = [
    "GridLog",
    "theta_direct_grid",
    "thetastar_product_grid",
    "g_grid",
    "theta_grid",
    "theta_system",
    "circle_points",
]

_TWO_PI = 2.0 * math.pi

# Direct summation loses absolute accuracy ~ eps * peak under cancellation;
# the system solver needs parameter accuracy well below its dedup radius, so
# it switches to the product identity once the peak term exceeds exp(12).
SYSTEM_DIRECT_PEAK = 12.0


@dataclass(frozen=True)
class GridLog:
    """Log-polar values on a grid with one absolute tail bound per point."""

    log_modulus: np.ndarray
    argument: np.ndarray
    tail_log: np.ndarray

    def to_complex(self) -> np.ndarray:
        out = np.exp(self.log_modulus + 1j * self.argument)
        out[np.isneginf(self.log_modulus)] = 0.0
        return out


def circle_points(center: complex, radius: float, samples: int) -> np.ndarray:
    """`samples` points uniformly on the circle about `center` (not closed)."""
    if samples < 1:
        raise DomainError("samples must be positive")
    phi = _TWO_PI * np.arange(samples) / samples
    return center + radius * np.exp(1j * phi)


def _reduce_angles(a: np.ndarray) -> np.ndarray:
    return np.mod(a + math.pi, _TWO_PI) - math.pi


def _series_cutoff(aq: float, ax_max: float, extra_digits: float = 45.0) -> int:
    """Term count after which every point's terms sit below exp(-extra)."""
    lq = -math.log(aq)
    j_half = max(0.0, (math.log(max(ax_max, 1e-300)) + math.log(2.0)) / lq)
    pl = peak_term_log(aq, ax_max)
    decay = math.sqrt(2.0 * (pl + extra_digits) / lq)
    return int(math.ceil(max(j_half, pl / lq + decay))) + 3


def theta_direct_grid(q, xs: np.ndarray, tol: float = 1e-14) -> GridLog:
    """Direct series over an array of x for one q."""
    qp = as_q(q)
    xs = np.asarray(xs, dtype=complex)
    aq = qp.modulus
    ax = np.abs(xs)
    ax_max = float(ax.max())
    if peak_term_log(aq, ax_max) > _SAFE_EXP:
        raise OverflowRiskError("peak series term out of range on this grid")
    J = _series_cutoff(aq, ax_max, extra_digits=-math.log(tol) + 12.0)
    qc = qp.value
    s = np.zeros_like(xs)
    term = np.ones_like(xs)
    qpow = 1.0 + 0j
    for j in range(J):
        s += term
        qpow *= qc
        term = term * (qpow * xs)
    tail = 2.0 * np.abs(term)
    with np.errstate(divide="ignore"):
        return GridLog(np.log(np.abs(s)), np.angle(s), np.log(tail, where=tail > 0,
                       out=np.full_like(tail, -np.inf)))


def thetastar_product_grid(q, xs: np.ndarray, tol: float = 1e-14) -> GridLog:
    """Triple product in log space over an array of x for one q."""
    qp = as_q(q)
    xs = np.asarray(xs, dtype=complex)
    if np.any(xs == 0):
        raise DomainError("triple product requires x != 0")
    aq = qp.modulus
    ax_max = float(np.abs(xs).max())
    ax_min = float(np.abs(xs).min())
    M, rel_tail = _product_cutoff(aq, ax_max, ax_min, tol)
    qc = qp.value
    inv = 1.0 / xs
    logmod = np.zeros(xs.shape)
    arg = np.zeros(xs.shape)
    qpow = 1.0 + 0j
    with np.errstate(divide="ignore", invalid="ignore"):
        for m in range(1, M + 1):
            prev = qpow
            qpow = qpow * qc
            f = (1.0 - qpow) * (1.0 + xs * qpow) * (1.0 + prev * inv)
            logmod += np.log(np.abs(f))
            arg = _reduce_angles(arg + np.angle(f))
    tail = np.where(np.isneginf(logmod), -np.inf, logmod + math.log(math.expm1(rel_tail)))
    return GridLog(logmod, arg, tail)


def _product_cutoff(aq: float, ax_max: float, ax_min: float, tol: float):
    m = 1
    while True:
        u = aq ** (m + 1) * (1.0 + ax_max) + aq ** m / ax_min
        ok = (aq ** (m + 1) * ax_max <= 0.5 and aq ** m / ax_min <= 0.5
              and aq ** (m + 1) <= 0.5)
        if ok:
            tail = 2.0 * u / (1.0 - aq)
            if tail <= max(tol, 1e-300):
                return m, tail
        m += 1
        if m > 2_000_000:  # pragma: no cover
            raise OverflowRiskError("product truncation failed")


def g_grid(q, xs: np.ndarray, tol: float = 1e-14):
    """Negative-index tail over an array of x; returns (values, tail bounds)."""
    qp = as_q(q)
    xs = np.asarray(xs, dtype=complex)
    ax_min = float(np.abs(xs).min())
    if not ax_min > 1.0:
        raise DomainError("g_grid requires |x| > 1 everywhere")
    qc = qp.value
    aq = qp.modulus
    inv = 1.0 / xs
    s = np.zeros_like(xs)
    term = inv.copy()
    qpow = 1.0 + 0j
    m = 0
    while True:
        m += 1
        s += term
        qpow *= qc
        term = term * (qpow * inv)
        tail = min(ax_min ** (-m) / (ax_min - 1.0),
                   2.0 * float(np.abs(term).max()) if aq ** m / ax_min < 0.5 else math.inf)
        if tail <= tol * max(float(np.abs(s).min()), 1.0) or tail <= tol:
            return s, tail
        if m > 1_000_000:  # pragma: no cover
            raise OverflowRiskError("g_grid did not converge")


def theta_grid(q, xs: np.ndarray, tol: float = 1e-14) -> GridLog:
    """theta on a grid: direct series when representable, else Theta - G."""
    qp = as_q(q)
    xs = np.asarray(xs, dtype=complex)
    ax_max = float(np.abs(xs).max())
    if peak_term_log(qp.modulus, ax_max) <= _SAFE_EXP:
        return theta_direct_grid(qp, xs, tol)
    prod = thetastar_product_grid(qp, xs, tol)
    g, g_tail = g_grid(qp, xs, tol)
    lp, ap = prod.log_modulus, prod.argument
    logmod = np.empty_like(lp)
    arg = np.empty_like(ap)
    small = lp < _SAFE_EXP  # includes -inf (exact lattice zeros)
    if np.any(small):
        pc = np.exp(lp[small] + 1j * ap[small])
        pc[np.isneginf(lp[small])] = 0.0
        diff = pc - g[small]
        with np.errstate(divide="ignore"):
            logmod[small] = np.log(np.abs(diff))
        arg[small] = np.angle(diff)
    big = ~small
    if np.any(big):
        scale = np.exp(np.where(lp[big] < 745.0, -lp[big], -745.0))
        ratio = g[big] * scale * np.exp(-1j * ap[big])
        corr = 1.0 - ratio
        logmod[big] = lp[big] + np.log(np.abs(corr))
        arg[big] = _reduce_angles(ap[big] + np.angle(corr))
    tail = np.logaddexp(prod.tail_log,
                        math.log(g_tail) if g_tail > 0.0 else -math.inf)
    return GridLog(logmod, arg, tail)


# ---------------------------------------------------------------------------
# simultaneous (theta, theta_x, theta_q, theta_xx, theta_xq) for Newton
# ---------------------------------------------------------------------------

def theta_system(qs: np.ndarray, xs: np.ndarray, tol: float = 1e-15) -> dict:
    """All partials needed by the two-equation double-zero solve.

    Accepts arrays of (q, x) pairs (q may vary per point).  Uses the direct
    series where the peak term is below exp(SYSTEM_DIRECT_PEAK) so that
    cancellation noise stays near machine level, and the triple-product
    identity elsewhere (valid for |x| > 1, which holds in the double-zero
    region).  Returns a dict with keys f, fx, fq, fxx, fxq, scale.
    """
    qs = np.asarray(qs, dtype=complex)
    xs = np.asarray(xs, dtype=complex)
    if qs.shape != xs.shape:
        raise DomainError("qs and xs must have matching shapes")
    aq = np.abs(qs)
    ax = np.abs(xs)
    if np.any(aq >= 0.999) or np.any(aq <= 0.0):
        raise DomainError("theta_system requires 0 < |q| <= 0.999 per point")
    out = {k: np.zeros(qs.shape, dtype=complex) for k in ("f", "fx", "fq", "fxx", "fxq")}
    peak = np.array([peak_term_log(a, b) for a, b in zip(aq.ravel(), ax.ravel())])
    peak = peak.reshape(qs.shape)
    direct = peak <= SYSTEM_DIRECT_PEAK
    if np.any(direct):
        _system_direct(qs[direct], xs[direct], out, direct)
    ident = ~direct
    if np.any(ident):
        if np.any(ax[ident] <= 1.0):
            raise DomainError("identity path needs |x| > 1 at large peaks")
        _system_identity(qs[ident], xs[ident], out, ident)
    out["scale"] = np.maximum(1.0, np.exp(np.minimum(peak, 300.0)))
    return out


def _system_direct(qs, xs, out, mask) -> None:
    aq_max = float(np.abs(qs).max())
    ax_max = float(np.abs(xs).max())
    J = _series_cutoff(aq_max, ax_max, extra_digits=50.0)
    f = np.zeros_like(qs)
    fx = np.zeros_like(qs)
    fq = np.zeros_like(qs)
    fxx = np.zeros_like(qs)
    fxq = np.zeros_like(qs)
    term = np.ones_like(qs)
    qpow = np.ones_like(qs)
    inv_x = 1.0 / xs
    inv_q = 1.0 / qs
    for j in range(J):
        f += term
        if j >= 1:
            e = j * (j + 1) / 2.0
            tx = term * inv_x
            fx += j * tx
            fq += e * term * inv_q
            fxq += (j * e) * tx * inv_q
            if j >= 2:
                fxx += (j * (j - 1)) * tx * inv_x
        qpow = qpow * qs
        term = term * (qpow * xs)
    out["f"][mask] = f
    out["fx"][mask] = fx
    out["fq"][mask] = fq
    out["fxx"][mask] = fxx
    out["fxq"][mask] = fxq


def _system_identity(qs, xs, out, mask) -> None:
    aq_max = float(np.abs(qs).max())
    ax = np.abs(xs)
    M, _ = _product_cutoff(aq_max, float(ax.max()), float(ax.min()), 1e-16)
    P = np.ones_like(qs)
    S1 = np.zeros_like(qs)
    S2 = np.zeros_like(qs)
    S3 = np.zeros_like(qs)
    S4 = np.zeros_like(qs)
    qpow = np.ones_like(qs)       # q^(m-1)
    prev2 = np.ones_like(qs)      # q^(m-2), unused at m=1 (coefficient 0)
    inv_x = 1.0 / xs
    inv_x2 = inv_x * inv_x
    with np.errstate(over="ignore", invalid="ignore"):
        for m in range(1, M + 1):
            prev = qpow
            qpow = prev * qs      # q^m
            fA = 1.0 - qpow
            fB = 1.0 + xs * qpow
            fC = 1.0 + prev * inv_x
            P = P * (fA * fB * fC)
            # log-derivative pieces: d/dx, d/dq, d2/dx2, d2/dxdq of ln(factor)
            bx = qpow / fB
            cx = -(prev * inv_x2) / fC
            S1 += bx + cx
            S2 += -m * prev / fA + m * xs * prev / fB \
                + ((m - 1) * prev2 * inv_x) / fC
            S3 += -(qpow * qpow) / (fB * fB) \
                + 2.0 * prev * inv_x2 * inv_x / fC \
                - (prev * prev) * inv_x2 * inv_x2 / (fC * fC)
            uq = (m - 1) * prev2
            S4 += m * prev / (fB * fB) \
                - uq * inv_x2 / fC + prev * uq * inv_x2 * inv_x / (fC * fC)
            prev2 = prev
    # negative-index side and its partials
    G = np.zeros_like(qs)
    Gx = np.zeros_like(qs)
    Gq = np.zeros_like(qs)
    Gxx = np.zeros_like(qs)
    Gxq = np.zeros_like(qs)
    term = inv_x.copy()            # m = 1: q^0 x^-1
    qpow = np.ones_like(qs)
    inv_q = 1.0 / qs
    m = 0
    while True:
        m += 1
        e = m * (m - 1) / 2.0
        G += term
        Gx += -m * term * inv_x
        Gq += e * term * inv_q
        Gxx += m * (m + 1) * term * inv_x2
        Gxq += -m * e * term * inv_x * inv_q
        qpow = qpow * qs
        term = term * (qpow * inv_x)
        if m > 4 and float(np.abs(term).max()) * (m + 2) ** 3 < 1e-20:
            break
        if m > 100_000:  # pragma: no cover
            break
    out["f"][mask] = P - G
    out["fx"][mask] = P * S1 - Gx
    out["fq"][mask] = P * S2 - Gq
    out["fxx"][mask] = P * (S1 * S1 + S3) - Gxx
    out["fxq"][mask] = P * (S1 * S2 + S4) - Gxq

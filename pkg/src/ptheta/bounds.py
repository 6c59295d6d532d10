"""Numerical replay of the inequality chain certifying simple zeros.

Each check recomputes both sides of one displayed inequality with the
evaluation tail placed on the adverse side (lower bounds get their tails
subtracted, upper bounds added) and reports the margin.  The disk
certificate combines the pointwise bounds |Theta| > 1 > 1/(8^11 - 1) >= |G|
on a sampled circle about a lattice point mu_s with the winding of theta,
which pins exactly one simple zero inside.

Margins follow one convention: `margin = lhs - rhs` where the assertion is
lhs > rhs (strict) or lhs >= rhs (non-strict, allowed a relative fuzz of
1e-12 for exact-equality boundary cases such as (1 - 1/2)^2 = 1/4).
Log-scale checks record `"scale": "log"` in their context.
"""

from __future__ import annotations

import math
import functools
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DomainError,
    KappaTieWarning,
    MULTIPLE_ZERO_BOUND,
    PI_SQUARED_OVER_6,
    QParameter,
    as_q,
    band_index,
    compute_c0,
    eval_G,
    euler_product_S,
    kappa,
    mu,
    tau,
)
from . import grids
from .zeros import winding_count

__all__ = [
    "BoundReport",
    "DiskCertificate",
    "check_dominant_term",
    "verify_disk_separation",
    "verify_G_bound",
    "verify_lemma_L_bounds",
    "verify_kappa_lower",
    "verify_prop_steps",
    "certify_disk_rouche",
    "verify_half_q_case",
    "run_suite",
    "SUITE_NAMES",
    "C2_CONSTANT",
]

# pinned decimal just below (1 - |x|^-1) * S(1/2) at |x| = 8^11
C2_CONSTANT = 0.2887880949

_NONSTRICT_FUZZ = 1e-12


@dataclass(frozen=True)
class BoundReport:
    """One replayed inequality: lhs (asserted larger) vs rhs, with margin."""

    name: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    context: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs,
                "margin": self.margin, "pass": self.passed, "context": self.context}


def _report(name: str, lhs: float, rhs: float, context: dict,
            strict: bool = True) -> BoundReport:
    margin = lhs - rhs
    if strict:
        ok = margin > 0.0
    else:
        ok = margin >= -_NONSTRICT_FUZZ * max(1.0, abs(lhs), abs(rhs))
    return BoundReport(name=name, lhs=float(lhs), rhs=float(rhs),
                       margin=float(margin), passed=bool(ok), context=context)


@functools.lru_cache(maxsize=1)
def _c0() -> float:
    return compute_c0(1e-12)


def _qctx(qp: QParameter, **extra) -> dict:
    ctx = {"q_re": qp.re, "q_im": qp.im}
    ctx.update(extra)
    return ctx


# ---------------------------------------------------------------------------
# log-space building blocks (actual values, conservative adjustments)
# ---------------------------------------------------------------------------

def _log_Q(qp: QParameter, tol: float = 1e-15) -> tuple[float, float]:
    """(log prod |1 - q^m|, log-tail) truncated once 2|q|^(M+1)/(1-|q|) <= tol."""
    aq = qp.modulus
    if aq > 0.985:
        raise DomainError("Euler-type products need |q| <= 0.985 here")
    M = 1
    while 2.0 * aq ** (M + 1) / (1.0 - aq) > tol or aq ** (M + 1) > 0.5:
        M += 1
    m = np.arange(1, M + 1)
    f = 1.0 - qp.value ** m
    return float(np.log(np.abs(f)).sum()), 2.0 * aq ** (M + 1) / (1.0 - aq)


def _log_R(qp: QParameter, x: complex, tol: float = 1e-15) -> tuple[float, float]:
    """log prod_{m>=1} |1 + q^(m-1)/x| with its log-tail."""
    aq = qp.modulus
    ax = abs(x)
    M = 1
    while 2.0 * aq ** M / (ax * (1.0 - aq)) > tol or aq ** M / ax > 0.5:
        M += 1
    m = np.arange(1, M + 1)
    f = 1.0 + qp.value ** (m - 1) / x
    if np.any(np.abs(f) == 0.0):
        return -math.inf, 0.0
    return float(np.log(np.abs(f)).sum()), 2.0 * aq ** M / (ax * (1.0 - aq))


def _log_U(qp: QParameter, x: complex, p: int, s: int) -> float:
    """log prod_{m=p}^{s} |1 + x q^m| (finite block, exact truncation)."""
    if s < p:
        return 0.0
    m = np.arange(p, s + 1)
    f = 1.0 + x * qp.value ** m
    if np.any(np.abs(f) == 0.0):
        return -math.inf
    return float(np.log(np.abs(f)).sum())


def _log_U_tail(qp: QParameter, x: complex, p: int, tol: float = 1e-15) -> tuple[float, float]:
    """log prod_{m=p}^inf |1 + x q^m| requiring |x q^p| < 1; returns log-tail too."""
    aq, ax = qp.modulus, abs(x)
    if not ax * aq ** p < 1.0:
        raise DomainError("U tail product needs |x q^p| < 1")
    M = p
    while 2.0 * ax * aq ** (M + 1) / (1.0 - aq) > tol or ax * aq ** (M + 1) > 0.5:
        M += 1
    return _log_U(qp, x, p, M), 2.0 * ax * aq ** (M + 1) / (1.0 - aq)


def _in_band(qp: QParameter, n: int) -> bool:
    lo = 1.0 - 1.0 / (n - 1)
    hi = 1.0 - 1.0 / n
    return lo - 1e-12 <= qp.modulus <= hi + 1e-12


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------

def check_dominant_term(q, k: int) -> BoundReport:
    """Largest-term dominance on the ring |x| = |q|^(-k-1/2).

    On that ring the term of index k has modulus |q|^(-k^2/2) and the other
    terms' moduli sum to M < |q|^(-k^2/2) tau(|q|).  Everything is compared
    as a ratio to the dominant term, and three margins are reported through
    the returned report's context: the raw dominance 1 > M/L, the majorant
    M/L < tau, and the threshold tau(|q|) <= 1 which characterises the
    no-multiple-zero modulus c0.  Outside |q| <= c0 the checks still report
    rather than raise.
    """
    qp = as_q(q)
    if k < 0:
        raise DomainError("k must be >= 0")
    aq = qp.modulus
    lr = math.log(aq)
    # sum_{j != k} |q|^((j-k)^2/2) relative to the dominant term, plus tail
    ratio = 0.0
    for nu in range(-k, 0):
        ratio += math.exp(nu * nu / 2.0 * lr)
    nu = 1
    while True:
        t = math.exp(nu * nu / 2.0 * lr)
        ratio += t
        if t < 1e-19:
            break
        nu += 1
    tail = 2.0 * t
    tau_q = tau(aq)
    ctx = _qctx(qp, k=k, c0=_c0(), ratio_other_terms=ratio + tail,
                tau=tau_q, tau_threshold_margin=1.0 - tau_q,
                tau_majorant_margin=tau_q - (ratio + tail))
    return _report("dominant-term", 1.0, ratio + tail, ctx, strict=True)


def verify_disk_separation(q, n: int, s1: int, s2: int) -> BoundReport:
    """Lattice separation |mu_s1 - mu_s2| > 1/n in the band of index n.

    Guarantees the closed 1/(2n)-disks about distinct lattice points are
    disjoint.  Computed in log scale to survive |mu| far beyond 1e300.
    """
    qp = as_q(q)
    if n < 3:
        raise DomainError("band index n must be >= 3")
    if not (s1 > s2 > 0):
        raise DomainError("need s1 > s2 > 0")
    if not _in_band(qp, n):
        raise DomainError(f"|q| = {qp.modulus} outside band n = {n}")
    # mu_s1 - mu_s2 = -q^(-s1) (1 - q^(s1-s2))
    log_d = -s1 * math.log(qp.modulus) + math.log(abs(1.0 - qp.value ** (s1 - s2)))
    ctx = _qctx(qp, n=n, s1=s1, s2=s2, scale="log", disk_radius=1.0 / (2 * n))
    return _report("disk-separation", log_d, math.log(1.0 / n), ctx, strict=True)


def verify_G_bound(q, x: complex) -> BoundReport:
    """|G| <= 1/(|x| - 1), with the evaluation tail added to the left side."""
    qp = as_q(q)
    x = complex(x)
    if not abs(x) > 1.0:
        raise DomainError("G bound needs |x| > 1")
    g = eval_G(qp, x, 1e-14)
    lhs = g.abs_value + (math.exp(g.tail_bound) if g.tail_bound != -math.inf else 0.0)
    rhs = 1.0 / (abs(x) - 1.0)
    ctx = _qctx(qp, x_re=x.real, x_im=x.imag, rho=abs(x))
    return _report("G-bound", rhs, lhs, ctx, strict=False)


def verify_lemma_L_bounds(q, x: complex, b: float) -> list[BoundReport]:
    """Product floors |Q|, |R|, |U_{kappa+1}^inf| >= powers of e^(pi^2/6)(1-b).

    Also replays the internal step 0 < T < pi^2/6 where
    ln S = (-|q|/(1-|q|)) T with T = sum_s |q|^s / ((s+1)(1+...+|q|^s)).
    """
    qp = as_q(q)
    x = complex(x)
    if not b > 1.0:
        raise DomainError("b must exceed 1")
    if qp.modulus > 1.0 - 1.0 / b + 1e-12:
        raise DomainError("|q| must be <= 1 - 1/b")
    if not abs(x) > 1.0:
        raise DomainError("|x| must exceed 1")
    kap = kappa(qp, x)
    base = PI_SQUARED_OVER_6 * (1.0 - b)
    ctx = _qctx(qp, x_re=x.real, x_im=x.imag, b=b, kappa=kap, scale="log")
    lq, lq_tail = _log_Q(qp)
    lr, lr_tail = _log_R(qp, x)
    lu, lu_tail = _log_U_tail(qp, x, kap + 1)
    reports = [
        _report("lemma-L:Q", lq - lq_tail, base, ctx, strict=False),
        _report("lemma-L:R", lr - lr_tail,
                math.log1p(-1.0 / abs(x)) + base, ctx, strict=False),
        _report("lemma-L:U-tail", lu - lu_tail, base, ctx, strict=False),
    ]
    # T in (0, pi^2/6)
    aq = qp.modulus
    T = 0.0
    s = 0
    qpow = 1.0
    geom = 1.0  # 1 + |q| + ... + |q|^s
    while True:
        T += qpow / ((s + 1) * geom)
        s += 1
        qpow *= aq
        geom += qpow
        if qpow / (s + 1) < 1e-18:
            break
    tctx = dict(ctx)
    tctx["T"] = T
    reports.append(_report("lemma-L:T-upper", PI_SQUARED_OVER_6, T, tctx, strict=True))
    reports.append(_report("lemma-L:T-positive", T, 0.0, tctx, strict=True))
    return reports


def verify_kappa_lower(q, x: complex, n: int) -> BoundReport:
    """kappa > 11n for |x| > 8^11 in the band of index n, plus the scalar chain.

    The chain 1/e^11 >= (1-1/n)^(11n) >= |q|^(11n) >= (1-1/(n-1))^(11n)
    >= 8^-11 and the band inequalities 1/4 <= (1-1/(n-1))^(n-1) <= 1/e,
    1/8 <= (1-1/(n-1))^n <= 1/e ride along in the context (all asserted
    non-strict; the n = 3 cases are exact equalities).
    """
    qp = as_q(q)
    x = complex(x)
    if n < 3:
        raise DomainError("n must be >= 3")
    if not abs(x) > MULTIPLE_ZERO_BOUND:
        raise DomainError("|x| must exceed 8^11")
    if not _in_band(qp, n):
        raise DomainError(f"|q| = {qp.modulus} outside band n = {n}")
    kap = kappa(qp, x)
    links = _kappa_chain_links(qp, n)
    ctx = _qctx(qp, x_abs=abs(x), n=n, kappa=kap, **links)
    margin = float(kap) - 11.0 * n
    ok = margin > 0.0 and links["chain_ok"] and links["partA_ok"]
    return BoundReport(name="kappa-lower", lhs=float(kap), rhs=11.0 * n,
                       margin=margin, passed=ok, context=ctx)


def _kappa_chain_links(qp: QParameter, n: int) -> dict:
    l_e = -11.0
    l_hi = 11.0 * n * math.log(1.0 - 1.0 / n)
    l_q = 11.0 * n * math.log(qp.modulus)
    l_lo = 11.0 * n * math.log(1.0 - 1.0 / (n - 1))
    l_8 = -11.0 * math.log(8.0)
    a1 = (1.0 - 1.0 / (n - 1)) ** (n - 1)
    a2 = (1.0 - 1.0 / (n - 1)) ** n
    fuzz = 1e-12 * (1.0 + 11.0 * n)
    return {
        "chain_e_vs_band": l_e - l_hi,
        "chain_band_vs_q": l_hi - l_q,
        "chain_q_vs_lowband": l_q - l_lo,
        "chain_lowband_vs_8": l_lo - l_8,
        "chain_ok": bool(l_e >= l_hi - fuzz and l_hi >= l_q - fuzz
                         and l_q >= l_lo - fuzz and l_lo >= l_8 - fuzz),
        "partA_ok": bool(0.25 <= a1 <= 1.0 / math.e + 1e-15
                         and 0.125 <= a2 <= 1.0 / math.e + 1e-15),
    }


def _require_on_circle(x: complex, center: complex, radius: float) -> None:
    # rounding of center + radius*e^(i phi) is governed by ulp(|center|)
    slack = 1e-6 * radius + 16.0 * 2.3e-16 * abs(center)
    if abs(abs(x - center) - radius) > slack:
        raise DomainError("x must lie on the stated circle")


def verify_prop_steps(q, s: int, n: int, x_on_circle: complex) -> list[BoundReport]:
    """Replay parts (C)-(F) of the disk estimate at one circle point.

    `x_on_circle` must sit on C(mu_s, 1/(2n)) with the circle inside
    X_(8^11), q in the band of index n, and the point external to every
    other lattice disk; kappa <= 11n is rejected as an inconsistent state.
    Emits one report per displayed inequality, including the (*), (**),
    (***) product assembly with the conservative smallest-modulus choice of
    the helper blocks P1 (4n factors) and P2 (n further factors).
    """
    qp = as_q(q)
    x = complex(x_on_circle)
    if s < 1:
        raise DomainError("s must be a positive integer")
    if n < 3:
        raise DomainError("n must be >= 3")
    if not _in_band(qp, n):
        raise DomainError(f"|q| = {qp.modulus} outside band n = {n}")
    radius = 1.0 / (2.0 * n)
    center = mu(qp, s)
    if not abs(center) - radius > MULTIPLE_ZERO_BOUND:
        raise DomainError("circle is not inside X_(8^11)")
    _require_on_circle(x, center, radius)
    with warnings.catch_warnings():
        # points on these circles legitimately ride |x q^s| = 1 +- ulp
        warnings.simplefilter("ignore", KappaTieWarning)
        kap = kappa(qp, x)
    if kap <= 11 * n:
        raise DomainError(f"inconsistent state: kappa = {kap} <= 11n = {11 * n}")
    return _prop_reports(qp, x, n, kap, radius, s,
                         prefix="prop", ctx_extra={"s": s})


def _prop_reports(qp: QParameter, x: complex, n: int, kap: int, radius: float,
                  s: int, prefix: str, ctx_extra: dict) -> list[BoundReport]:
    aq, ax = qp.modulus, abs(x)
    qc = qp.value
    lq_abs = math.log(aq)
    ctx = _qctx(qp, x_re=x.real, x_im=x.imag, n=n, kappa=kap, scale="log")
    ctx.update(ctx_extra)
    near = min(abs(1.0 + x * qc ** kap), abs(1.0 + x * qc ** (kap - 1)))
    if near == 0.0:
        raise DomainError(
            "circle collapsed onto the lattice in binary64; s is too large "
            "for this radius to be representable")
    reports = []
    # |x| >= |q|^(1-kappa), stated in passing, checked explicitly
    reports.append(_report(f"{prefix}:x-lower-bound", math.log(ax),
                           (1.0 - kap) * lq_abs, ctx, strict=False))
    one_m_rx = 1.0 - ax ** -0.5
    # part (C): two displayed three-factor blocks
    blk1 = (math.log(abs(1.0 + x * qc ** kap)) + math.log(abs(1.0 + x * qc))
            + math.log(abs(1.0 + x * qc ** 2)))
    blk2 = (math.log(abs(1.0 + x * qc ** (kap - 1))) + math.log(abs(1.0 + x * qc ** 3))
            + math.log(abs(1.0 + x * qc ** 4)))
    rhs_c = 2.0 * math.log(one_m_rx) - math.log(2.0 * n)
    reports.append(_report(f"{prefix}:partC-block1", blk1, rhs_c, ctx, strict=False))
    reports.append(_report(f"{prefix}:partC-block2", blk2, rhs_c, ctx, strict=False))
    # part (D): per-factor floors on m <= kappa-2 and the length-(4n+1) block
    m = np.arange(1, kap - 1)
    fac = np.abs(1.0 + x * qc ** m)
    floors = 1.0 - aq ** (kap - 1 - m)
    d_margin = np.log(fac) - np.log(floors)
    dctx = dict(ctx)
    dctx["argmin_m"] = int(m[np.argmin(d_margin)])
    reports.append(_report(f"{prefix}:partD-factors", float(d_margin.min()), 0.0,
                           dctx, strict=False))
    lo_block = kap - 2 - 4 * n
    u_block = _log_U(qp, x, lo_block, kap - 2)
    reports.append(_report(f"{prefix}:partD-block", u_block,
                           PI_SQUARED_OVER_6 * (1.0 - n), ctx, strict=False))
    # part (E)
    log_8pi = PI_SQUARED_OVER_6 * math.log(8.0)
    reports.append(_report(f"{prefix}:partE-largest-factor",
                           math.log(ax) + (kap - 2) * lq_abs - 4.0 * n * lq_abs,
                           -4.0 * n * lq_abs, ctx, strict=True))
    reports.append(_report(f"{prefix}:partE-band-vs-e4", -4.0 * n * lq_abs, 4.0,
                           ctx, strict=False))
    reports.append(_report(f"{prefix}:partE-e4-vs-8pi", 4.0,
                           math.log(math.exp(log_8pi) + 1.0), ctx, strict=True))
    reports.append(_report(f"{prefix}:partE-scalar", 3.5, log_8pi, ctx, strict=True))
    m_small = np.arange(5, kap - 2 - 4 * n)
    small = np.abs(x * qc ** m_small) - 1.0
    ectx = dict(ctx)
    ectx["factor_count"] = int(len(m_small))
    reports.append(_report(f"{prefix}:partE-small-factors",
                           math.log(float(small.min())), log_8pi, ectx, strict=True))
    # (*): the two (C) blocks assembled
    star_lhs = (math.log(abs(1.0 + x * qc ** kap))
                + math.log(abs(1.0 + x * qc ** (kap - 1)))
                + _log_U(qp, x, 1, 4))
    star_rhs = 4.0 * math.log(one_m_rx) - math.log(4.0 * n * n)
    reports.append(_report(f"{prefix}:star", star_lhs, star_rhs, ctx, strict=False))
    # (**) and (***): conservative P1 (4n smallest), P2 (next n smallest)
    order = np.sort(np.log(np.abs(1.0 + x * qc ** m_small)))
    p1 = float(order[:4 * n].sum())
    p2 = float(order[4 * n:5 * n].sum())
    lQ, lQ_tail = _log_Q(qp)
    lR, lR_tail = _log_R(qp, x)
    lU, lU_tail = _log_U_tail(qp, x, kap + 1)
    display = (4.0 * n * log_8pi + math.log1p(-1.0 / ax)
               + 4.0 * PI_SQUARED_OVER_6 * (1.0 - n))
    actual = p1 + (lQ - lQ_tail) + (lR - lR_tail) + (lU - lU_tail) + u_block
    reports.append(_report(f"{prefix}:star2-actual", actual, display, ctx, strict=False))
    reports.append(_report(f"{prefix}:star2-display", display, 0.0, ctx, strict=True))
    reports.append(_report(f"{prefix}:star3", p2 + star_rhs, 0.0, ctx, strict=True))
    return reports


def verify_half_q_case(q, x: complex) -> list[BoundReport]:
    """The c0 <= |q| <= 1/2 estimate with disks of radius 1/4.

    Checks kappa >= 15, the constant floors |Q| >= c1, |R| >= c2,
    |U_{kappa+1}^inf| >= c1, the nine factor floors 8^11 c0^s - 1 for
    s = 5..13, the radius-1/4 variant of (*), and the assembled constant
    chain c1 c2 c1 (1/16)(1 - 8^-5.5)^4 prod (8^11 c0^s - 1) > 1.
    """
    qp = as_q(q)
    x = complex(x)
    c0 = _c0()
    if not (c0 - 1e-12 <= qp.modulus <= 0.5 + 1e-12):
        raise DomainError("half-q case needs c0 <= |q| <= 1/2")
    ax = abs(x)
    if not ax > MULTIPLE_ZERO_BOUND:
        raise DomainError("|x| must exceed 8^11")
    _require_external_quarter_disks(qp, x)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", KappaTieWarning)
        kap = kappa(qp, x)
    qc = qp.value
    if abs(1.0 + x * qc ** kap) == 0.0 or abs(1.0 + x * qc ** (kap - 1)) == 0.0:
        raise DomainError(
            "point collapsed onto the lattice in binary64; |x| too large "
            "for the quarter-disk geometry to be representable")
    c1 = euler_product_S(0.5, 1e-14)
    ctx = _qctx(qp, x_re=x.real, x_im=x.imag, kappa=kap, c0=c0, c1=c1,
                c2=C2_CONSTANT, scale="log")
    reports = [
        _report("half-q:kappa-ge-15", float(kap), 15.0,
                dict(ctx, scale="linear"), strict=False),
    ]
    lQ, lQ_tail = _log_Q(qp)
    lR, lR_tail = _log_R(qp, x)
    lU, lU_tail = _log_U_tail(qp, x, kap + 1)
    reports.append(_report("half-q:Q-ge-c1", lQ - lQ_tail, math.log(c1), ctx,
                           strict=False))
    reports.append(_report("half-q:R-intermediate",
                           math.log1p(-1.0 / ax) + math.log(c1),
                           math.log(C2_CONSTANT), ctx, strict=True))
    reports.append(_report("half-q:R-ge-c2", lR - lR_tail, math.log(C2_CONSTANT),
                           ctx, strict=True))
    reports.append(_report("half-q:U-tail-ge-c1", lU - lU_tail, math.log(c1), ctx,
                           strict=False))
    # factor floors for the first nine entries of U_5^(kappa-2)
    for sv in range(5, 14):
        floor = MULTIPLE_ZERO_BOUND * c0 ** sv - 1.0
        reports.append(_report(f"half-q:factor-floor-{sv}",
                               abs(1.0 + x * qc ** sv), floor,
                               dict(ctx, s=sv, scale="linear"), strict=False))
    # (*) with n replaced by 2: radius 1/4 disks
    one_m_rx = 1.0 - ax ** -0.5
    star_lhs = (math.log(abs(1.0 + x * qc ** kap))
                + math.log(abs(1.0 + x * qc ** (kap - 1)))
                + _log_U(qp, x, 1, 4))
    star_rhs = 4.0 * math.log(one_m_rx) - math.log(16.0)
    reports.append(_report("half-q:star-n2", star_lhs, star_rhs, ctx, strict=False))
    # the assembled constant chain, compared to 1
    chain = (2.0 * math.log(c1) + math.log(C2_CONSTANT) - math.log(16.0)
             + 4.0 * math.log1p(-8.0 ** -5.5))
    for sv in range(5, 14):
        chain += math.log(MULTIPLE_ZERO_BOUND * c0 ** sv - 1.0)
    reports.append(_report("half-q:chain-gt-1", chain, 0.0,
                           dict(ctx, chain_log=chain), strict=True))
    return reports


def _require_external_quarter_disks(qp: QParameter, x: complex) -> None:
    """Reject points inside any open disk D(mu_i, 1/4), modulo center ulp."""
    lq = -math.log(qp.modulus)
    ax = abs(x)
    i_mid = math.log(ax) / lq
    for i in range(max(1, int(i_mid) - 6), int(i_mid) + 7):
        center = mu(qp, i)
        slack = 1e-9 + 16.0 * 2.3e-16 * abs(center)
        if abs(x - center) < 0.25 - slack:
            raise DomainError(f"x lies inside the quarter disk about mu_{i}")


# ---------------------------------------------------------------------------
# disk certificate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiskCertificate:
    """Outcome of the sampled |Theta| / |G| / winding check on one circle.

    `min_abs_thetastar` saturates to inf when the true minimum exceeds the
    binary64 range (routine on these circles); `min_abs_thetastar_log` is
    always finite and is what the pass decision uses.
    """

    q: QParameter
    s: int
    n: int | None
    regime: str              # "n-band" or "half-q"
    radius: float
    samples: int
    min_abs_thetastar: float
    min_abs_thetastar_log: float
    max_abs_G: float
    winding_theta: int
    in_X: bool
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "schema": "cert/1",
            "q_re": self.q.re,
            "q_im": self.q.im,
            "s": self.s,
            "n_or_regime": self.n if self.regime == "n-band" else "half-q",
            "radius": self.radius,
            "samples": self.samples,
            "min_thetastar": self.min_abs_thetastar,
            "min_thetastar_log": self.min_abs_thetastar_log,
            "max_G": self.max_abs_G,
            "winding": self.winding_theta,
            "in_X": self.in_X,
            "pass": self.passed,
        }


def certify_disk_rouche(q, s: int, regime: str = "auto", n: int | None = None,
                        samples: int = 4096, tol: float = 1e-12) -> DiskCertificate:
    """Sampled certificate that theta has exactly one simple zero near mu_s.

    Pass requires the circle inside X_(8^11), min |Theta| > 1 (product path,
    tail subtracted), max |G| <= 1/(8^11 - 1) (tail added), and winding of
    theta equal to 1.  A circle not inside X_(8^11) yields in_X = False and
    a failing certificate without raising.
    """
    qp = as_q(q)
    if s < 1:
        raise DomainError("s must be a positive integer (|mu_s| <= 1 otherwise)")
    if samples < 256:
        raise DomainError("samples must be >= 256")
    aq = qp.modulus
    if regime == "auto":
        regime = "n-band" if aq >= 0.5 else "half-q"
    if regime == "n-band":
        if n is None:
            n, _tie = band_index(aq)
        elif not _in_band(qp, n):
            raise DomainError(f"|q| = {aq} outside band n = {n}")
        radius = 1.0 / (2.0 * n)
    elif regime == "half-q":
        if not (_c0() - 1e-12 <= aq <= 0.5 + 1e-12):
            raise DomainError("half-q regime needs c0 <= |q| <= 1/2")
        n = None
        radius = 0.25
    else:
        raise DomainError("regime must be 'auto', 'n-band', or 'half-q'")
    log_mu = -s * math.log(aq)
    in_x = log_mu > math.log(MULTIPLE_ZERO_BOUND + radius)
    if not in_x:
        return DiskCertificate(q=qp, s=s, n=n, regime=regime, radius=radius,
                               samples=samples, min_abs_thetastar=math.nan,
                               min_abs_thetastar_log=math.nan, max_abs_G=math.nan,
                               winding_theta=0, in_X=False, passed=False)
    center = mu(qp, s)
    xs = grids.circle_points(center, radius, samples)
    prod = grids.thetastar_product_grid(qp, xs, tol)
    lm = prod.log_modulus
    min_log = float(lm.min())
    finite = np.isfinite(lm)
    if np.any(finite):
        rel_effect = math.exp(float(prod.tail_log[finite][0] - lm[finite][0]))
        min_log_lower = min_log + math.log1p(-min(0.5, rel_effect))
    else:  # pragma: no cover - whole contour on zeros cannot happen off-lattice
        min_log_lower = -math.inf
    g_vals, g_tail = grids.g_grid(qp, xs, tol)
    max_g_upper = float(np.abs(g_vals).max()) + g_tail
    winding = winding_count(qp, center, radius, function="theta", samples=samples)
    passed = bool(in_x and min_log_lower > 0.0
                  and max_g_upper <= 1.0 / (MULTIPLE_ZERO_BOUND - 1.0)
                  and winding == 1)
    return DiskCertificate(
        q=qp, s=s, n=n, regime=regime, radius=radius, samples=samples,
        min_abs_thetastar=math.exp(min_log_lower) if min_log_lower < 709.0 else math.inf,
        min_abs_thetastar_log=min_log_lower,
        max_abs_G=max_g_upper,
        winding_theta=winding,
        in_X=True,
        passed=passed,
    )


# ---------------------------------------------------------------------------
# randomized hypothesis-satisfying suites
# ---------------------------------------------------------------------------

SUITE_NAMES = ("g-bound", "disk-separation", "lemma-L", "kappa-lower",
               "prop-steps", "half-q")


def _unit(rng) -> complex:
    u = rng.uniform(0.0, 2.0 * math.pi)
    return complex(math.cos(u), math.sin(u))


def _rand_band_q(rng, n: int, complex_q: bool = True) -> QParameter:
    lo = 1.0 - 1.0 / (n - 1)
    hi = 1.0 - 1.0 / n
    m = rng.uniform(lo, hi)
    z = m * (_unit(rng) if complex_q else 1.0)
    return QParameter.from_complex(z)


def _min_s_in_X(aq: float, radius: float) -> int:
    return int(math.ceil(math.log(MULTIPLE_ZERO_BOUND + radius + 1.0)
                         / -math.log(aq))) + 1


def _max_resolvable_s(aq: float) -> int:
    # beyond |mu_s| ~ 1e13 a radius-1/16 circle drops under the center's ulp
    return int(math.floor(math.log(1e13) / -math.log(aq)))


def run_suite(name: str, trials: int = 1000, seed: int = 0,
              n_cap: int = 8) -> list[BoundReport]:
    """Run one randomized suite; every trial satisfies its hypothesis.

    All generated inequalities are proved facts, so a failing report is a
    defect somewhere: in the evaluators, the sampling, or the hypothesis
    handling.  `n_cap` limits the band index (product lengths grow ~ 23 n).
    """
    if name not in SUITE_NAMES:
        raise DomainError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    out: list[BoundReport] = []
    for _ in range(trials):
        if name == "g-bound":
            m = rng.uniform(0.05, 0.97)
            qp = QParameter.from_complex(m * _unit(rng))
            ax = math.exp(rng.uniform(math.log(1.05), math.log(MULTIPLE_ZERO_BOUND * 100)))
            x = ax * _unit(rng)
            out.append(verify_G_bound(qp, x))
        elif name == "disk-separation":
            n = int(rng.integers(3, n_cap + 1))
            qp = _rand_band_q(rng, n)
            s2 = int(rng.integers(1, 150))
            s1 = s2 + int(rng.integers(1, 50))
            out.append(verify_disk_separation(qp, n, s1, s2))
        elif name == "lemma-L":
            b = rng.uniform(1.05, 12.0)
            m = rng.uniform(0.02, min(1.0 - 1.0 / b, 0.97))
            qp = QParameter.from_complex(m * _unit(rng))
            ax = math.exp(rng.uniform(math.log(1.05), math.log(1e12)))
            x = ax * _unit(rng)
            out.extend(verify_lemma_L_bounds(qp, x, b))
        elif name == "kappa-lower":
            n = int(rng.integers(3, n_cap + 1))
            qp = _rand_band_q(rng, n)
            ax = MULTIPLE_ZERO_BOUND * math.exp(rng.uniform(1e-6, math.log(100.0)))
            x = ax * _unit(rng)
            out.append(verify_kappa_lower(qp, x, n))
        elif name == "prop-steps":
            n = int(rng.integers(3, n_cap + 1))
            qp = _rand_band_q(rng, n)
            radius = 1.0 / (2.0 * n)
            s_lo = _min_s_in_X(qp.modulus, radius)
            s_hi = max(s_lo, _max_resolvable_s(qp.modulus))
            s = int(rng.integers(s_lo, s_hi + 1))
            x = mu(qp, s) + radius * _unit(rng)
            out.extend(verify_prop_steps(qp, s, n, x))
        elif name == "half-q":
            m = rng.uniform(_c0(), 0.5)
            qp = QParameter.from_complex(m * _unit(rng))
            s_lo = _min_s_in_X(m, 0.25)
            s_hi = max(s_lo, _max_resolvable_s(m))
            s = int(rng.integers(s_lo, s_hi + 1))
            x = mu(qp, s) + 0.25 * _unit(rng)
            out.extend(verify_half_q_case(qp, x))
    return out

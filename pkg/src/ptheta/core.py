"""Evaluation core for the partial theta function and its bilateral relatives.

The central objects are the one-sided series

    theta(q, x) = sum_{j>=0} q^(j(j+1)/2) x^j,      0 < |q| < 1,

its bilateral extension Theta(q, x) = sum_{j in Z} q^(j(j+1)/2) x^j with the
simple zero lattice mu_s = -q^(-s), the negative-index tail

    G(q, x) = sum_{j<=-1} q^(j(j+1)/2) x^j,         so  theta = Theta - G,

and the triple-product form of Theta,

    Theta(q, x) = prod_{m>=1} (1 - q^m)(1 + x q^m)(1 + q^(m-1)/x),

which is the overflow-safe evaluation route for |x| far beyond the range
where the series' peak term q^(-k^2/2) fits in a double.  Every evaluator
returns a log-polar value together with a certified bound on the truncated
tail, so downstream zero counting and inequality checks can put the error
on the adverse side.
"""

from __future__ import annotations

import cmath
import math
import os
import warnings
from dataclasses import dataclass

__all__ = [
    "PI_SQUARED_OVER_6",
    "MULTIPLE_ZERO_BOUND",
    "PThetaError",
    "DomainError",
    "OverflowRiskError",
    "ConvergenceError",
    "ContourError",
    "CountMismatchError",
    "RecordParseError",
    "CancellationWarning",
    "KappaTieWarning",
    "QParameter",
    "LogComplex",
    "EvalResult",
    "RingSpec",
    "as_q",
    "eval_theta",
    "eval_theta_dx",
    "eval_G",
    "eval_thetastar_series",
    "eval_thetastar_product",
    "eval_theta_via_identity",
    "eval_theta_auto",
    "mu",
    "kappa",
    "tau",
    "compute_c0",
    "euler_product_S",
    "peak_term_log",
    "band_index",
]

PI_SQUARED_OVER_6 = math.pi * math.pi / 6.0

# Modulus bound audited for every solved double zero: 8^11 = 2^33, exact in
# binary64.
MULTIPLE_ZERO_BOUND = 8.0 ** 11

# exp() overflows just above 709.78; stay clear of the summation headroom
_SAFE_EXP = 690.0

_TWO_PI = 2.0 * math.pi


class PThetaError(Exception):
    """Base class for errors raised by this package."""


class DomainError(PThetaError, ValueError):
    """An argument violates a documented precondition."""


class OverflowRiskError(PThetaError, OverflowError):
    """Direct summation would overflow; switch to the identity path."""


class ConvergenceError(PThetaError, RuntimeError):
    """An iteration failed to converge (Newton, tolerance loop, ...)."""


class ContourError(PThetaError, RuntimeError):
    """A sampling contour passes too close to a zero, or the accumulated
    winding refuses to settle on an integer."""


class CountMismatchError(PThetaError, RuntimeError):
    """Zeros found by seeding do not account for the winding count."""


class RecordParseError(PThetaError, ValueError):
    """A persisted record file line failed to parse."""


class CancellationWarning(UserWarning):
    """The identity path theta = Theta - G lost precision to cancellation."""


class KappaTieWarning(UserWarning):
    """|x q^m| is within 1e-15 of 1; kappa resolved toward the larger m."""


def _reduce_angle(a: float) -> float:
    """Reduce an angle to the half-open interval (-pi, pi]."""
    if -math.pi < a <= math.pi:
        return a
    a = math.fmod(a, _TWO_PI)
    if a > math.pi:
        a -= _TWO_PI
    elif a <= -math.pi:
        a += _TWO_PI
    return a


def _log_abs(z: complex) -> float:
    """log|z| with -inf for 0 and component-scaling for huge moduli."""
    a = abs(z)
    if a == 0.0:
        return -math.inf
    if math.isinf(a):
        # re/im are finite doubles, so halving makes hypot representable
        return math.log(math.hypot(z.real / 2.0, z.imag / 2.0)) + math.log(2.0)
    return math.log(a)


def _logaddexp(a: float, b: float) -> float:
    if a == -math.inf:
        return b
    if b == -math.inf:
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


@dataclass(frozen=True)
class QParameter:
    """The nome q, restricted to the punctured open unit disk 0 < |q| < 1."""

    re: float
    im: float = 0.0

    def __post_init__(self) -> None:
        m = math.hypot(self.re, self.im)
        if not (0.0 < m < 1.0) or math.isnan(m):
            raise DomainError(f"q must satisfy 0 < |q| < 1, got |q| = {m!r}")

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    @property
    def modulus(self) -> float:
        return math.hypot(self.re, self.im)

    @property
    def argument(self) -> float:
        return math.atan2(self.im, self.re)

    @property
    def is_real(self) -> bool:
        return self.im == 0.0

    @classmethod
    def from_complex(cls, z: complex) -> "QParameter":
        z = complex(z)
        return cls(z.real, z.imag)


def as_q(q) -> QParameter:
    """Coerce a complex/float/QParameter into a validated QParameter."""
    if isinstance(q, QParameter):
        return q
    return QParameter.from_complex(complex(q))


@dataclass(frozen=True)
class LogComplex:
    """A complex number stored as (log|z|, arg z); log_modulus = -inf is 0.

    The representation survives moduli like exp(700) that appear in the
    triple product at |x| ~ 8^11, where the ordinary complex value would
    overflow.
    """

    log_modulus: float
    argument: float = 0.0

    def __post_init__(self) -> None:
        if math.isnan(self.log_modulus):
            raise DomainError("log_modulus is NaN")
        object.__setattr__(self, "argument", _reduce_angle(self.argument))
        if self.log_modulus == -math.inf:
            object.__setattr__(self, "argument", 0.0)

    @classmethod
    def from_complex(cls, z: complex) -> "LogComplex":
        z = complex(z)
        if z == 0:
            return cls(-math.inf, 0.0)
        return cls(_log_abs(z), cmath.phase(z))

    def to_complex(self) -> complex:
        if self.log_modulus == -math.inf:
            return 0j
        if self.log_modulus > 709.5:
            raise OverflowRiskError(
                f"modulus exp({self.log_modulus:.3f}) exceeds binary64 range")
        return cmath.rect(math.exp(self.log_modulus), self.argument)

    @property
    def is_zero(self) -> bool:
        return self.log_modulus == -math.inf

    def __mul__(self, other: "LogComplex") -> "LogComplex":
        return LogComplex(self.log_modulus + other.log_modulus,
                          self.argument + other.argument)

    def __truediv__(self, other: "LogComplex") -> "LogComplex":
        if other.is_zero:
            raise ZeroDivisionError("division by LogComplex zero")
        return LogComplex(self.log_modulus - other.log_modulus,
                          self.argument - other.argument)

    def __neg__(self) -> "LogComplex":
        return LogComplex(self.log_modulus, self.argument + math.pi)

    def scaled(self, c: complex) -> "LogComplex":
        """Multiply by an ordinary complex scalar."""
        c = complex(c)
        if c == 0:
            return LogComplex(-math.inf, 0.0)
        return LogComplex(self.log_modulus + _log_abs(c),
                          self.argument + cmath.phase(c))

    def add(self, other: "LogComplex") -> "LogComplex":
        """Sum computed as big * (1 + small/big) to stay in range."""
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.log_modulus >= other.log_modulus:
            big, small = self, other
        else:
            big, small = other, self
        d = small.log_modulus - big.log_modulus
        ratio = cmath.rect(math.exp(d) if d > -745.0 else 0.0,
                           small.argument - big.argument)
        s = 1.0 + ratio
        if s == 0:
            return LogComplex(-math.inf, 0.0)
        return LogComplex(big.log_modulus + math.log(abs(s)),
                          big.argument + cmath.phase(s))


@dataclass(frozen=True)
class EvalResult:
    """A function value plus a certified absolute bound on omitted terms.

    `tail_bound` is stored as log of the absolute bound (-inf when the
    truncation is exact); `terms_used` is the number of series terms or
    product factors actually accumulated.
    """

    value: LogComplex
    tail_bound: float
    terms_used: int

    def __post_init__(self) -> None:
        if math.isnan(self.tail_bound):
            raise DomainError("tail_bound is NaN")
        if self.terms_used < 1:
            raise DomainError("terms_used must be >= 1")

    @property
    def complex_value(self) -> complex:
        return self.value.to_complex()

    @property
    def abs_value(self) -> float:
        lm = self.value.log_modulus
        if lm == -math.inf:
            return 0.0
        return math.exp(lm) if lm <= 709.5 else math.inf


@dataclass(frozen=True)
class RingSpec:
    """Circle |x| = |q|^(-k-1/2), the zero-free ring of index k."""

    k: int
    radius: float

    def __post_init__(self) -> None:
        if self.k < 0:
            raise DomainError("ring index k must be >= 0")
        if not self.radius > 0.0:
            raise DomainError("ring radius must be positive")

    @classmethod
    def for_q(cls, q, k: int) -> "RingSpec":
        qp = as_q(q)
        return cls(k, qp.modulus ** (-(k + 0.5)))


# ---------------------------------------------------------------------------
# precision mode (PTHETA_PRECISION in {double, extended})
# ---------------------------------------------------------------------------

def _extended_precision() -> bool:
    mode = os.environ.get("PTHETA_PRECISION", "double").strip().lower()
    if mode not in ("double", "extended", ""):
        raise DomainError(f"PTHETA_PRECISION must be 'double' or 'extended', got {mode!r}")
    return mode == "extended"


def _real_acc(x: float):
    """Scalar accumulator honoring the precision mode."""
    if _extended_precision():
        import numpy as np

        return np.longdouble(x)
    return x


# ---------------------------------------------------------------------------
# scalar helpers
# ---------------------------------------------------------------------------

def peak_term_log(q_modulus: float, x_modulus: float) -> float:
    """log of the largest series term max_j |q|^(j(j+1)/2) |x|^j.

    Continuous upper bound; the peak sits near j* = log|x|/log(1/|q|) - 1/2
    and controls both overflow risk and the local series scale used for
    residual gates.
    """
    if x_modulus <= 0.0:
        return 0.0
    lq = -math.log(q_modulus)  # > 0
    lx = math.log(x_modulus)
    t = lx / lq - 0.5
    if t <= 0.0:
        return 0.0
    return t * lx - t * (t + 1.0) / 2.0 * lq


def _check_tol(tol: float) -> None:
    if not (tol > 0.0) or math.isnan(tol):
        raise DomainError(f"tol must be positive, got {tol!r}")


def eval_theta(q, x: complex, tol: float = 1e-12) -> EvalResult:
    """Direct partial sum of theta(q, x) = sum_{j>=0} q^(j(j+1)/2) x^j.

    Truncates at the first J with |q|^J |x| < 1/2 whose geometric tail
    majorant 2 |q|^(J(J+1)/2) |x|^J drops below tol * max(|partial|, 1).
    Raises OverflowRiskError when the peak term would leave binary64 range;
    the caller should then use `eval_theta_via_identity`.

    Parameters
    ----------
    q : QParameter or complex
        The nome, 0 < |q| < 1.
    x : complex
        Evaluation point (entire in x, any value accepted).
    tol : float
        Relative/absolute truncation target.
    """
    qp = as_q(q)
    _check_tol(tol)
    x = complex(x)
    aq, ax = qp.modulus, abs(x)
    if peak_term_log(aq, ax) > _SAFE_EXP:
        raise OverflowRiskError(
            "peak series term exceeds binary64 range; use eval_theta_via_identity")
    qc = qp.value
    extended = _extended_precision()
    if extended:
        import numpy as np

        s = np.clongdouble(0)
        term = np.clongdouble(1)
        qpow = np.clongdouble(1)
        xl = np.clongdouble(x)
        ql = np.clongdouble(qc)
    else:
        s = 0j
        term = 1 + 0j
        qpow = 1 + 0j
        xl, ql = x, qc
    j = 0
    abs_term = 1.0
    while True:
        s += term
        j += 1
        qpow = qpow * ql
        term = term * qpow * xl
        abs_term = abs(complex(term))
        if aq ** j * ax < 0.5:
            tail = 2.0 * abs_term
            if tail <= tol * max(abs(complex(s)), 1.0):
                break
        if j > 200_000:
            raise ConvergenceError("theta series did not meet tolerance")
    value = LogComplex.from_complex(complex(s))
    return EvalResult(value=value,
                      tail_bound=math.log(tail) if tail > 0.0 else -math.inf,
                      terms_used=j)


def eval_theta_dx(q, x: complex, tol: float = 1e-12) -> EvalResult:
    """Term-wise x-derivative sum_{j>=1} j q^(j(j+1)/2) x^(j-1).

    Same truncation scheme as `eval_theta` with the ratio majorant
    (1 + 1/j) |q|^(j+1) |x| and tail <= 2 * next term.
    """
    qp = as_q(q)
    _check_tol(tol)
    x = complex(x)
    aq, ax = qp.modulus, abs(x)
    if peak_term_log(aq, ax) > _SAFE_EXP:
        raise OverflowRiskError(
            "peak series term exceeds binary64 range; use the identity path")
    qc = qp.value
    s = 0j
    term = qc  # j = 1 term: q * x^0
    qpow = qc
    j = 1
    while True:
        s += term
        j += 1
        qpow = qpow * qc
        term = term * (j / (j - 1)) * qpow * x
        abs_term = abs(term)
        if 2.0 * aq ** j * ax < 0.5:
            tail = 2.0 * abs_term
            if tail <= tol * max(abs(s), 1.0):
                break
        if j > 200_000:
            raise ConvergenceError("theta_dx series did not meet tolerance")
    return EvalResult(value=LogComplex.from_complex(s),
                      tail_bound=math.log(tail) if tail > 0.0 else -math.inf,
                      terms_used=j - 1)


def _g_sum(qc: complex, x: complex, tol: float, need_geometric: bool):
    """Shared negative-index accumulation sum_{m>=1} q^(m(m-1)/2) x^(-m).

    Returns (sum, tail_abs, terms).  With need_geometric the reported tail
    is the documented |x|^(-M) / (|x| - 1) bound (requires |x| > 1); the
    stopping rule additionally uses the q-decay majorant so the loop also
    terminates for 0 < |x| <= 1 when need_geometric is False.
    """
    ax = abs(x)
    aq = abs(qc)
    inv = 1.0 / x
    s = 0j
    term = inv  # m = 1: exponent 0
    qpow = 1 + 0j
    m = 0
    while True:
        m += 1
        s += term
        qpow = qpow * qc          # q^m
        term = term * qpow * inv  # q^(m(m+1)/2) x^-(m+1)
        # q-decay majorant: ratio of consecutive terms is |q|^m / |x|
        ratio = aq ** m / ax
        tail_q = 2.0 * abs(term) if ratio < 0.5 else math.inf
        if need_geometric:
            tail_geom = ax ** (-m) / (ax - 1.0)
            tail = min(tail_geom, tail_q)
        else:
            tail = tail_q
        if tail <= tol * max(abs(s), 1.0):
            return s, tail, m
        if m > 1_000_000:
            raise ConvergenceError("negative-index series did not converge")


def eval_G(q, x: complex, tol: float = 1e-12) -> EvalResult:
    """Negative-index tail G(q, x) = sum_{m>=1} q^(m(m-1)/2) x^(-m).

    Requires |x| > 1; the reported tail bound after M terms never exceeds
    the geometric majorant |x|^(-M) / (|x| - 1), and the full value obeys
    |G| <= 1/(rho - 1) on |x| >= rho > 1.
    """
    qp = as_q(q)
    _check_tol(tol)
    x = complex(x)
    if not abs(x) > 1.0:
        raise DomainError(f"eval_G requires |x| > 1, got |x| = {abs(x)!r}")
    s, tail, m = _g_sum(qp.value, x, tol, need_geometric=True)
    return EvalResult(value=LogComplex.from_complex(s),
                      tail_bound=math.log(tail) if tail > 0.0 else -math.inf,
                      terms_used=m)


def eval_thetastar_series(q, x: complex, tol: float = 1e-12) -> EvalResult:
    """Bilateral sum Theta(q, x) = theta(q, x) + G(q, x), summed two-sided.

    Defined for any x != 0; the negative side converges through the
    super-geometric q-decay even for |x| <= 1 where `eval_G`'s geometric
    majorant would not apply.
    """
    qp = as_q(q)
    _check_tol(tol)
    x = complex(x)
    if x == 0:
        raise DomainError("bilateral series requires x != 0")
    pos = eval_theta(qp, x, tol)
    neg_sum, neg_tail, neg_terms = _g_sum(qp.value, x, tol, need_geometric=abs(x) > 1.0)
    total = pos.complex_value + neg_sum
    tail = _logaddexp(pos.tail_bound,
                      math.log(neg_tail) if neg_tail > 0.0 else -math.inf)
    return EvalResult(value=LogComplex.from_complex(total),
                      tail_bound=tail,
                      terms_used=pos.terms_used + neg_terms)


def _product_truncation(aq: float, ax: float, tol: float) -> tuple[int, float]:
    """Factor count M and log-tail bound for the triple product.

    Uses -log(1-u) <= 2u on u <= 1/2 applied to the three factor families,
    summing to 2 |q|^(M+1) (1 + |x| + 1/(|q| |x|)) / (1 - |q|).
    """
    budget = max(tol, 1e-300)
    m = 1
    while True:
        u = aq ** (m + 1) * (1.0 + ax) + aq ** m / ax
        if aq ** (m + 1) * ax <= 0.5 and aq ** m / ax <= 0.5 and aq ** (m + 1) <= 0.5:
            tail = 2.0 * u / (1.0 - aq)
            if tail <= budget:
                return m, tail
        m += 1
        if m > 2_000_000:
            raise ConvergenceError("triple product truncation failed")


def eval_thetastar_product(q, x: complex, tol: float = 1e-12) -> EvalResult:
    """Triple product prod_{m>=1} (1-q^m)(1+x q^m)(1+q^(m-1)/x), log space.

    Factor moduli and arguments are accumulated one factor at a time, so the
    result stays finite at |x| ~ 8^11 where the assembled product reaches
    exp(700) and beyond.  Landing exactly on the zero lattice x = -q^(-s)
    yields log_modulus = -inf with an exact (-inf) tail.
    """
    qp = as_q(q)
    _check_tol(tol)
    x = complex(x)
    if x == 0:
        raise DomainError("triple product requires x != 0")
    aq, ax = qp.modulus, abs(x)
    M, rel_tail = _product_truncation(aq, ax, tol)
    qc = qp.value
    inv = 1.0 / x
    logmod = 0.0
    arg = 0.0
    qpow = 1 + 0j           # q^(m-1)
    for m in range(1, M + 1):
        prev = qpow
        qpow = qpow * qc    # q^m
        f = (1.0 - qpow) * (1.0 + x * qpow) * (1.0 + prev * inv)
        a = abs(f)
        if a == 0.0:
            return EvalResult(value=LogComplex(-math.inf, 0.0),
                              tail_bound=-math.inf, terms_used=m)
        logmod += math.log(a)
        arg = _reduce_angle(arg + cmath.phase(f))
    # absolute tail: |true - partial| <= |partial| (exp(rel_tail) - 1)
    tail_log = logmod + math.log(math.expm1(rel_tail)) if rel_tail > 0.0 else -math.inf
    return EvalResult(value=LogComplex(logmod, arg),
                      tail_bound=tail_log,
                      terms_used=M)


def eval_theta_via_identity(q, x: complex, tol: float = 1e-12) -> EvalResult:
    """theta = Theta - G with Theta from the triple product.

    The overflow-safe route for large |x|.  When the two magnitudes agree
    within 1e-12 relative the subtraction has lost most significant digits
    (the point sits essentially on a zero of theta) and a
    CancellationWarning is issued.
    """
    qp = as_q(q)
    _check_tol(tol)
    x = complex(x)
    if not abs(x) > 1.0:
        raise DomainError("identity path requires |x| > 1")
    prod = eval_thetastar_product(qp, x, tol)
    g = eval_G(qp, x, tol)
    gc = g.complex_value
    lp = prod.value.log_modulus
    lg = g.value.log_modulus
    if lp != -math.inf and lg != -math.inf and abs(lp - lg) <= 1e-12:
        warnings.warn("theta = Theta - G is cancellation-limited here",
                      CancellationWarning, stacklevel=2)
    if lp == -math.inf:
        value = LogComplex.from_complex(-gc)
    elif lp < _SAFE_EXP:
        value = LogComplex.from_complex(prod.value.to_complex() - gc)
    else:
        # |Theta| >= exp(690) dwarfs |G| <= 1/(|x|-1); fold G in as a ratio
        ratio = gc * cmath.rect(math.exp(-lp) if lp < 745.0 else 0.0,
                                -prod.value.argument)
        corr = 1.0 - ratio
        value = LogComplex(lp + math.log(abs(corr)),
                           prod.value.argument + cmath.phase(corr))
    return EvalResult(value=value,
                      tail_bound=_logaddexp(prod.tail_bound, g.tail_bound),
                      terms_used=prod.terms_used + g.terms_used)


def eval_theta_auto(q, x: complex, tol: float = 1e-12) -> EvalResult:
    """theta via direct summation when representable, else the identity path."""
    qp = as_q(q)
    x = complex(x)
    if peak_term_log(qp.modulus, abs(x)) <= _SAFE_EXP:
        return eval_theta(qp, x, tol)
    return eval_theta_via_identity(qp, x, tol)


def mu(q, s: int) -> complex:
    """Zero lattice point mu_s = -q^(-s) of the bilateral function."""
    qp = as_q(q)
    s = int(s)
    if s == 0:
        return complex(-1.0)
    if qp.is_real and qp.re > 0.0:
        # binary exponentiation keeps powers of binary-exact q exact
        base = 1.0 / qp.re if s > 0 else qp.re
        e = abs(s)
        acc = 1.0
        while e:
            if e & 1:
                acc *= base
            base *= base
            e >>= 1
        return complex(-acc)
    lm = -s * math.log(qp.modulus)
    ang = _reduce_angle(-s * qp.argument + math.pi)
    if lm > 709.5:
        raise OverflowRiskError(f"|mu_{s}| = exp({lm:.2f}) exceeds binary64 range")
    return cmath.rect(math.exp(lm), ang)


def kappa(q, x: complex) -> int:
    """Least m >= 1 with |x q^m| < 1.

    The logarithmic estimate is verified by direct comparison at m-1 and m;
    when |x||q|^m sits within 1e-15 of 1 the comparison biases toward the
    larger m (equality does not satisfy the strict inequality) and a
    KappaTieWarning is issued.
    """
    qp = as_q(q)
    ax = abs(complex(x))
    if not ax > 1.0:
        raise DomainError("kappa requires |x| > 1")
    aq = qp.modulus
    m = max(1, int(math.floor(math.log(ax) / -math.log(aq))) )
    # direct verification, walking at most a few steps
    while ax * aq ** m >= 1.0:
        m += 1
    while m > 1 and ax * aq ** (m - 1) < 1.0:
        m -= 1
    for probe in (m - 1, m):
        if probe >= 1 and abs(ax * aq ** probe - 1.0) < 1e-15:
            warnings.warn(f"|x q^{probe}| within 1e-15 of 1; kappa biased to larger m",
                          KappaTieWarning, stacklevel=2)
    return m


def tau(r: float) -> float:
    """tau(r) = 2 sum_{v>=1} r^(v^2/2), the dominant-term comparison sum.

    Converges super-geometrically; summed to absolute error below 1e-15.
    """
    if not (0.0 <= r < 1.0) or math.isnan(r):
        raise DomainError(f"tau requires 0 <= r < 1, got {r!r}")
    if r == 0.0:
        return 0.0
    lr = math.log(r)
    s = _real_acc(0.0)
    v = 1
    while True:
        t = math.exp(v * v / 2.0 * lr)
        s = s + 2.0 * t
        if t < 1e-18:
            return float(s)
        v += 1


def compute_c0(tol: float) -> float:
    """Bisection root of tau(r) = 1 on [0.1, 0.3] to interval width tol.

    tau is strictly increasing there, with tau(0.1) < 1 < tau(0.3).
    """
    if not (0.0 < tol < 1e-3):
        raise DomainError("compute_c0 requires 0 < tol < 1e-3")
    lo, hi = 0.1, 0.3
    flo = tau(lo) - 1.0
    fhi = tau(hi) - 1.0
    if not (flo < 0.0 < fhi):
        raise ConvergenceError("bisection bracket lost")  # pragma: no cover
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if tau(mid) - 1.0 < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def euler_product_S(r: float, tol: float = 1e-14) -> float:
    """Euler product S(r) = prod_{m>=1} (1 - r^m).

    Truncated once the log-tail bound 2 r^(M+1) / (1 - r) falls below tol.
    """
    if not (0.0 <= r < 1.0) or math.isnan(r):
        raise DomainError(f"euler_product_S requires 0 <= r < 1, got {r!r}")
    _check_tol(tol)
    if r == 0.0:
        return 1.0
    log_s = _real_acc(0.0)
    rpow = 1.0
    m = 0
    while True:
        m += 1
        rpow *= r
        log_s = log_s + math.log1p(-rpow)
        tail = 2.0 * rpow * r / (1.0 - r)
        if rpow * r <= 0.5 and tail <= tol:
            return float(math.exp(log_s))
        if m > 5_000_000:
            raise ConvergenceError("Euler product truncation failed")


def band_index(q_modulus: float) -> tuple[int, bool]:
    """Index n >= 3 with 1 - 1/(n-1) <= |q| <= 1 - 1/n, plus a tie flag.

    A modulus exactly equal to a band endpoint 1 - 1/n belongs to both the
    n and n+1 bands; it is assigned to the smaller n and flagged.
    """
    if not (0.5 <= q_modulus < 1.0):
        raise DomainError("band index needs 1/2 <= |q| < 1")
    n = max(3, math.ceil(1.0 / (1.0 - q_modulus) - 1e-12))
    tie = abs(q_modulus - (1.0 - 1.0 / n)) < 1e-15
    return n, tie

"""Zero location: argument-principle counting, Newton polishing, and the
two-equation solve for double zeros in (q, x).

Winding numbers are sampled argument accumulations on circles that stay
O(1) away from zeros; a count is only accepted when the pre-rounding value
sits within 0.25 of an integer and survives sample doubling.  Newton runs
on the overflow-safe evaluation paths so seeds at lattice points with
|x| ~ 8^11 and beyond remain usable.
"""

from __future__ import annotations

import math
import cmath
from dataclasses import dataclass

import numpy as np

from .core import (
    ContourError,
    ConvergenceError,
    CountMismatchError,
    DomainError,
    LogComplex,
    MULTIPLE_ZERO_BOUND,
    QParameter,
    as_q,
    eval_G,
    eval_theta,
    eval_theta_dx,
    eval_thetastar_product,
    mu,
    peak_term_log,
    _SAFE_EXP,
)
from . import grids

__all__ = [
    "ZeroRecord",
    "DoubleZeroRecord",
    "winding_count",
    "refine_zero_newton",
    "zeros_up_to_k",
    "multiplicity_estimate",
    "solve_double_zero",
    "solve_double_zero_batch",
]

_MAX_WINDING_SAMPLES = 2 ** 20

# a contour point whose |f| drops this far (log scale) below the contour
# median indicates a zero essentially on the contour
_NEAR_ZERO_LOG_DROP = math.log(1e10)


@dataclass(frozen=True)
class ZeroRecord:
    """A located zero of theta(q, .)."""

    q: QParameter
    location: complex
    multiplicity: int
    residual: float           # log |theta| at the location
    newton_iterations: int
    seed: str                 # "mu-lattice <s>", "ring <k>", or "user"

    @property
    def scaled_residual(self) -> float:
        """|theta| divided by the local series scale max(1, peak term)."""
        scale_log = max(0.0, peak_term_log(self.q.modulus, abs(self.location)))
        return math.exp(self.residual - scale_log) if self.residual != -math.inf else 0.0


@dataclass(frozen=True)
class DoubleZeroRecord:
    """A solved point of theta = d(theta)/dx = 0 over unknowns (q, x)."""

    q: complex
    zeta: complex
    residual_theta: float     # |theta| / local series scale
    residual_dtheta: float    # |theta_x| / local series scale
    jacobian_condition: float
    newton_iterations: int = 0

    @property
    def bound_check(self) -> bool:
        """Recomputed |zeta| <= 8^11; never stored independently."""
        return abs(self.zeta) <= MULTIPLE_ZERO_BOUND

    @property
    def degenerate_jacobian(self) -> bool:
        return not (self.jacobian_condition < 1e12)


def _grid_eval(q, xs: np.ndarray, function: str, tol: float) -> grids.GridLog:
    if function == "theta":
        return grids.theta_grid(q, xs, tol)
    if function == "thetastar":
        return grids.thetastar_product_grid(q, xs, tol)
    raise DomainError(f"function must be 'theta' or 'thetastar', got {function!r}")


def winding_count(q, center: complex, radius: float, function: str = "theta",
                  samples: int = 4096, tol: float = 1e-12) -> int:
    """Zero count inside a circle from the accumulated argument change.

    The pre-rounding value total/2pi must land within 0.25 of an integer;
    otherwise the sample count doubles (up to 2^20) before giving up.  A
    sampled |f| collapsing 10 orders below the contour median, or hitting
    an exact zero, raises ContourError.
    """
    qp = as_q(q)
    if samples < 256:
        raise DomainError("winding_count requires samples >= 256")
    if not radius > 0.0:
        raise DomainError("radius must be positive")
    n = int(samples)
    while True:
        xs = grids.circle_points(complex(center), float(radius), n)
        ev = _grid_eval(qp, xs, function, tol)
        lm = ev.log_modulus
        if np.any(np.isneginf(lm)):
            raise ContourError("contour passes through a zero")
        med = float(np.median(lm))
        if float(lm.min()) < med - _NEAR_ZERO_LOG_DROP:
            raise ContourError("contour passes too close to a zero")
        a = ev.argument
        d = np.roll(a, -1) - a
        d -= 2.0 * math.pi * np.round(d / (2.0 * math.pi))
        w = float(d.sum() / (2.0 * math.pi))
        if abs(w - round(w)) <= 0.25:
            return int(round(w))
        if 2 * n > _MAX_WINDING_SAMPLES:
            raise ContourError(
                f"winding failed to settle on an integer (got {w!r} at {n} samples)")
        n *= 2


def multiplicity_estimate(q, zero: complex, r_tiny: float, samples: int = 1024) -> int:
    """Winding of theta on the circle of radius r_tiny about a candidate zero.

    Returns the multiplicity (1 for simple, 2 for double, 0 when no zero is
    enclosed).  The circle must be zero-free except possibly at the center,
    which the contour near-zero check enforces.
    """
    if not r_tiny > 0.0:
        raise DomainError("r_tiny must be positive")
    return winding_count(q, zero, r_tiny, function="theta", samples=samples)


def _theta_fx_log(qp: QParameter, x: complex, tol: float):
    """(theta, theta_x) as LogComplex via an overflow-safe path."""
    if peak_term_log(qp.modulus, abs(x)) <= _SAFE_EXP:
        f = eval_theta(qp, x, tol)
        fx = eval_theta_dx(qp, x, tol)
        return f.value, fx.value
    if not abs(x) > 1.0:  # pragma: no cover - unreachable: huge peak needs big |x|
        raise DomainError("identity path requires |x| > 1")
    prod = eval_thetastar_product(qp, x, tol)
    if prod.value.is_zero:
        # exact lattice hit: nudge one ulp off the lattice
        return _theta_fx_log(qp, x * (1.0 + 4e-16) + 1e-300, tol)
    from .core import _product_truncation  # shared truncation rule

    qc = qp.value
    M, _ = _product_truncation(qp.modulus, abs(x), tol)
    s1 = 0j
    qpow = 1.0 + 0j
    inv = 1.0 / x
    for _m in range(1, M + 1):
        prev = qpow
        qpow = qpow * qc
        s1 += qpow / (1.0 + x * qpow) - (prev * inv * inv) / (1.0 + prev * inv)
    g = eval_G(qp, x, tol)
    # G_x by term-wise differentiation
    gx = 0j
    term = inv
    qpow = 1.0 + 0j
    m = 0
    while True:
        m += 1
        gx += -m * term * inv
        qpow = qpow * qc
        term = term * (qpow * inv)
        if m > 3 and abs(term) * (m + 2) < 1e-25 * max(1.0, abs(gx)):
            break
    f = prod.value.add(-LogComplex.from_complex(g.complex_value))
    fx = prod.value.scaled(s1).add(-LogComplex.from_complex(gx))
    return f, fx


def refine_zero_newton(q, x0: complex, tol: float = 1e-10, max_iter: int = 50,
                       seed: str = "user", estimate_multiplicity: bool = True) -> ZeroRecord:
    """Polish a zero of theta(q, .) by damped Newton iteration.

    Succeeds when the step shrinks below tol * max(|x|, 1) and the residual
    clears the scaled gate |theta| <= 1e-9 * max(1, peak term); anything
    else raises.  A derivative collapsing below 1e-14 of the local scale
    signals a suspected multiple zero and raises ConvergenceError with that
    diagnosis (use multiplicity_estimate / solve_double_zero there).
    """
    qp = as_q(q)
    if max_iter < 1:
        raise DomainError("max_iter must be >= 1")
    x = complex(x0)
    f, fx = _theta_fx_log(qp, x, tol)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        scale_log = max(0.0, peak_term_log(qp.modulus, abs(x)))
        if fx.log_modulus + math.log(max(abs(x), 1.0)) < scale_log + math.log(1e-14):
            raise ConvergenceError(
                "derivative vanishes at the working scale: suspected multiple "
                "zero; use multiplicity_estimate / solve_double_zero")
        step_log = f / fx
        if step_log.log_modulus > 700.0:
            raise ConvergenceError("Newton step out of range")
        step = -step_log.to_complex()
        # damped update: halve while the residual grows
        lam = 1.0
        for _ in range(8):
            x_new = x + lam * step
            f_new, fx_new = _theta_fx_log(qp, x_new, tol)
            if f_new.log_modulus <= f.log_modulus or f.log_modulus == -math.inf:
                break
            lam *= 0.5
        x, f, fx = x_new, f_new, fx_new
        if abs(lam * step) <= tol * max(abs(x), 1.0):
            break
    else:
        raise ConvergenceError(f"no convergence in {max_iter} Newton iterations")
    scale_log = max(0.0, peak_term_log(qp.modulus, abs(x)))
    if f.log_modulus > scale_log + math.log(1e-9):
        raise ConvergenceError(
            f"converged step but residual above gate: log|theta| = {f.log_modulus:.3f}")
    multiplicity = 1
    if estimate_multiplicity:
        r_tiny = 1e-3 * max(1.0, abs(x))
        for attempt in range(3):
            try:
                multiplicity = multiplicity_estimate(qp, x, r_tiny)
                break
            except ContourError:
                r_tiny /= 7.0
        else:
            raise ContourError("no zero-free multiplicity circle found")
    return ZeroRecord(q=qp, location=x, multiplicity=multiplicity,
                      residual=f.log_modulus, newton_iterations=iterations,
                      seed=seed)


def zeros_up_to_k(q, k_max: int, tol: float = 1e-10, samples: int = 4096) -> list[ZeroRecord]:
    """All zeros with modulus below the ring |q|^(-k_max - 1/2).

    Ring windings fix the zero count per annulus (|q|^(-k+1/2),
    |q|^(-k-1/2)); Newton seeded at the lattice point mu_k and at
    perturbations of it must account for every count, with multiplicities
    summing to the winding difference, else CountMismatchError.
    """
    qp = as_q(q)
    if qp.modulus > 0.95:
        raise DomainError("zeros_up_to_k requires |q| <= 0.95")
    if not (0 <= k_max <= 12):
        raise DomainError("zeros_up_to_k requires 0 <= k_max <= 12")
    windings = [winding_count(qp, 0.0, qp.modulus ** (-(k + 0.5)), "theta", samples)
                for k in range(k_max + 1)]
    records: list[ZeroRecord] = []
    for k in range(1, k_max + 1):
        count = windings[k] - windings[k - 1]
        if count == 0:
            continue
        inner = qp.modulus ** (-(k - 0.5))
        outer = qp.modulus ** (-(k + 0.5))
        center = mu(qp, k)
        seeds = [(center, f"mu-lattice {k}")]
        for fac in (1.07, 0.93, cmath.exp(0.25j), cmath.exp(-0.25j),
                    1.2, 0.84, 1.35 * cmath.exp(0.5j), 1.35 * cmath.exp(-0.5j),
                    0.74, 1.5):
            seeds.append((center * fac, f"ring {k}"))
        found: list[ZeroRecord] = []
        for seed_x, label in seeds:
            if sum(r.multiplicity for r in found) >= count:
                break
            try:
                rec = refine_zero_newton(qp, seed_x, tol=tol, seed=label)
            except (ConvergenceError, ContourError):
                continue
            if not inner < abs(rec.location) < outer:
                continue
            if any(abs(rec.location - r.location) < 1e-6 * max(1.0, abs(r.location))
                   for r in found):
                continue
            found.append(rec)
        total = sum(r.multiplicity for r in found)
        if total != count:
            raise CountMismatchError(
                f"annulus {k}: winding difference {count} but multiplicities sum to {total}")
        records.extend(found)
    records.sort(key=lambda r: (abs(r.location), cmath.phase(r.location)))
    return records


# ---------------------------------------------------------------------------
# double zeros: Newton on (theta, theta_x) = 0 over (q, x)
# ---------------------------------------------------------------------------

def _system_residual_scaled(sys_out, idx=None):
    f = sys_out["f"] if idx is None else sys_out["f"][idx]
    fx = sys_out["fx"] if idx is None else sys_out["fx"][idx]
    scale = sys_out["scale"] if idx is None else sys_out["scale"][idx]
    return np.abs(f) / scale, np.abs(fx) / scale


def solve_double_zero(q0: complex, x0: complex, tol: float = 1e-10,
                      max_iter: int = 80, mode: str = "real") -> DoubleZeroRecord:
    """Newton for the system theta(q, x) = theta_x(q, x) = 0.

    In "real" mode the iteration is restricted to q in (0, 1) and x on the
    negative real axis (where the known double zeros live); "complex" mode
    iterates both unknowns as complex numbers.  Divergence, a q iterate
    leaving the unit annulus, or a singular Jacobian raise ConvergenceError.
    """
    if mode not in ("real", "complex"):
        raise DomainError("mode must be 'real' or 'complex'")
    q0 = complex(q0)
    if not (0.0 < abs(q0) < 1.0):
        raise DomainError("q0 must satisfy 0 < |q0| < 1")
    qs = np.array([q0.real if mode == "real" else q0], dtype=complex)
    xs = np.array([complex(x0).real if mode == "real" else complex(x0)], dtype=complex)
    rec = solve_double_zero_batch(qs, xs, tol=tol, max_iter=max_iter, mode=mode)
    if not rec:
        raise ConvergenceError("double-zero Newton did not converge from this seed")
    return rec[0]


def solve_double_zero_batch(qs: np.ndarray, xs: np.ndarray, tol: float = 1e-10,
                            max_iter: int = 80, mode: str = "real",
                            residual_tol: float = 1e-10) -> list[DoubleZeroRecord]:
    """Vectorized damped Newton over a grid of (q0, x0) seeds.

    Runs every seed simultaneously, freezing converged points and dropping
    iterates that leave the search region (q outside the unit annulus, or
    off the negative real axis in real mode).  Returns converged,
    deduplicated records sorted by (|q|, arg q, |zeta|).
    """
    real_mode = mode == "real"
    q = np.asarray(qs, dtype=complex).ravel().copy()
    x = np.asarray(xs, dtype=complex).ravel().copy()
    if real_mode:
        q = q.real.astype(complex)
        x = x.real.astype(complex)
    converged = np.zeros(q.shape, dtype=bool)
    iters = np.zeros(q.shape, dtype=int)
    jac_cond = np.full(q.shape, np.nan)
    res_f = np.full(q.shape, np.nan)
    res_fx = np.full(q.shape, np.nan)

    def in_region(qv, xv):
        ok = (np.abs(qv) > 0.02) & (np.abs(qv) < 0.985) & np.isfinite(qv) & np.isfinite(xv)
        if real_mode:
            ok &= (xv.real < -1e-6) & (xv.real > -1e8)
        else:
            ok &= (np.abs(xv) > 1e-6) & (np.abs(xv) < 1e8)
        return ok

    alive = in_region(q, x)
    for it in range(1, max_iter + 1):
        idx = np.flatnonzero(alive)
        if len(idx) == 0:
            break
        sysv = grids.theta_system(q[idx], x[idx])
        f, fx = sysv["f"], sysv["fx"]
        fq, fxx, fxq = sysv["fq"], sysv["fxx"], sysv["fxq"]
        rf, rfx = _system_residual_scaled(sysv)
        det = fq * fxx - fx * fxq
        # Newton step for unknowns (q, x); J = [[fq, fx], [fxq, fxx]]
        with np.errstate(divide="ignore", invalid="ignore"):
            dq = -(f * fxx - fx * fx) / det
            dx = -(fq * fx - fxq * f) / det
        if real_mode:
            dq = dq.real.astype(complex)
            dx = dx.real.astype(complex)
        step = np.abs(dq) + np.abs(dx)
        finite = np.isfinite(step)
        good = finite & (step <= tol * (1.0 + np.abs(x[idx]))) \
            & (rf <= residual_tol) & (rfx <= residual_tol)
        gi = idx[good]
        if len(gi):
            converged[gi] = True
            res_f[gi] = rf[good]
            res_fx[gi] = rfx[good]
            for k, p in zip(np.flatnonzero(good), gi):
                J = np.array([[fq[k], fx[k]], [fxq[k], fxx[k]]])
                if real_mode:
                    J = J.real
                jac_cond[p] = float(np.linalg.cond(J))
            alive[gi] = False
        move = finite & ~good
        mi = idx[move]
        if len(mi) == 0:
            alive[idx[~finite]] = False
            continue
        # backtracking: quarter steps whose residual norm blows up
        old_norm = np.abs(f[move]) + np.abs(fx[move])
        lam = np.ones(len(mi))
        dqm, dxm = dq[move], dx[move]
        for _ in range(5):
            q_try = q[mi] + lam * dqm
            x_try = x[mi] + lam * dxm
            ok = in_region(q_try, x_try)
            sys_try = grids.theta_system(np.where(ok, q_try, 0.3 + 0j),
                                         np.where(ok, x_try, -5.0 + 0j))
            new_norm = np.abs(sys_try["f"]) + np.abs(sys_try["fx"])
            worse = ok & (new_norm > 4.0 * old_norm) & (old_norm > 0) & (lam > 2e-2)
            if not np.any(worse):
                break
            lam = np.where(worse, lam * 0.25, lam)
        q[mi] = np.where(ok, q_try, q[mi])
        x[mi] = np.where(ok, x_try, x[mi])
        iters[mi] = it
        alive[mi[~ok]] = False
        alive[idx[~finite]] = False
    records = []
    for p in np.flatnonzero(converged):
        records.append(DoubleZeroRecord(
            q=complex(q[p].real, 0.0) if real_mode else complex(q[p]),
            zeta=complex(x[p].real, 0.0) if real_mode else complex(x[p]),
            residual_theta=float(res_f[p]),
            residual_dtheta=float(res_fx[p]),
            jacobian_condition=float(jac_cond[p]),
            newton_iterations=int(iters[p]),
        ))
    return deduplicate_double_zeros(records)


def deduplicate_double_zeros(records: list[DoubleZeroRecord]) -> list[DoubleZeroRecord]:
    """Merge records representing the same point.

    Two records coincide when |dq| + |dzeta| / (1 + |zeta|) < 1e-6; the
    survivor is the one with the smaller residuals.  Output is sorted by
    (|q|, arg q, |zeta|) for deterministic downstream files.
    """
    ordered = sorted(records, key=lambda r: (r.residual_theta + r.residual_dtheta))
    kept: list[DoubleZeroRecord] = []
    for rec in ordered:
        dup = any(abs(rec.q - k.q) + abs(rec.zeta - k.zeta) / (1.0 + abs(k.zeta)) < 1e-6
                  for k in kept)
        if not dup:
            kept.append(rec)
    kept.sort(key=lambda r: (abs(r.q), cmath.phase(r.q), abs(r.zeta)))
    return kept

"""Independent oracles and frozen expected values.

Everything here is computed by brute force (plain partial sums, mpmath
high-precision arithmetic, discriminant bisection) with no imports from
the package under test, so the two routes share no code.  Frozen constants
were produced by the same functions at higher precision; the slow
re-derivation tests recompute a sample of them from scratch.
"""

import math

import mpmath as mp


# --- frozen spot values (brute-force partial sums, 50 digits) -------------

THETA_HALF_AT_1 = 1.641632560655153866293843
THETA_01_AT_M10 = 0.099000999900000999999
THETA_HALF_AT_2 = 2.641632560655153866294
THETA_HALF_AT_4 = 6.283265121310307732588
DTHETA_03_AT_M75 = 0.008279748916766394304840293
THETASTAR_03_27 = 2.434402915030133577902067
THETA_COMPLEX_SPOT = complex(4.157913438249298655607, 1.49355990779607801127)  # q=0.3+0.2j, x=5-3j

# log moduli at exact binary64 inputs (q = float(2/3) etc.)
LOG_THETASTAR_23_BIG = 646.5447025506976352831      # x = -(8^11 * 1.5)
LOG_THETA_23_NEAR_MU60 = 683.0348180336171443898    # x = -(1.5^60) + 0.1
LOG_THETASTAR_COMPLEX = 1.523623123054289650995     # q=0.3+0.2j, x=5-3j

# --- frozen scalar constants ----------------------------------------------

C0_TRUE = 0.2078750206082156478403799      # root of tau(r) = 1
S_HALF = 0.2887880950866024212788997       # prod (1 - 2^-m)
S_C0 = 0.7493178825057554041315803
TAU_01 = 0.652518797587511691518453
TAU_02 = 0.9758633981696138213111109

# --- frozen zeros of theta(0.1, .) (mpmath Newton on brute sums) ----------

XI_Q01 = [
    -11.251801209875693599,
    -99.857893013613292139,
    -1000.0014183059198963,
    -9999.9999985815603853,
    -100000.00000000014185,
    -1000000.0,
]
XI2_Q005 = -399.941209752149065238

# --- frozen real-q confluences (critical-value bisection, mpmath) ---------
# (q_j, zeta_j): theta(q_j, zeta_j) = theta_x(q_j, zeta_j) = 0

CONFLUENCES = [
    (0.30924933860007748, -7.5032559642441924),
    (0.51695935978805207, -11.713168218924191),
    (0.63062831606317428, -14.068512932539863),
    (0.70126507008266075, -15.578168997259134),
    (0.74926893163561501, -16.63337673820628),
    (0.78398445783871835, -17.41541487160217),
    (0.81025065091505753, -18.019891925743672),
    (0.83081558108445893, -18.502141580039105),
    (0.84735344372903840, -18.896486950989503),
    (0.86094177236116272, -19.225391195678345),
    (0.87230527958119461, -19.504196985295006),
    (0.88194926043203750, -19.743754894099817),
    (0.89023676132372343, -19.951963932452552),
]


# --- brute-force evaluators (binary64, generous fixed term counts) ---------

def brute_theta(q, x, terms=300):
    q, x = complex(q), complex(x)
    s, term, qpow = 0j, 1 + 0j, 1 + 0j
    for _j in range(terms + 1):
        s += term
        qpow *= q
        term *= qpow * x   # t_(j+1) = t_j * q^(j+1) * x
    return s


def brute_theta_dx(q, x, terms=300):
    q, x = complex(q), complex(x)
    s = 0j
    term, qpow = q, q     # j = 1 term and q^1
    for j in range(1, terms + 1):
        s += term
        qpow *= q
        term *= (j + 1) / j * qpow * x
    return s


def brute_G(q, x, terms=200):
    s = 0j
    for m in range(1, terms + 1):
        s += q ** (m * (m - 1) / 2) * complex(x) ** (-m)
    return s


def brute_kappa(q_abs, x_abs, cap=100000):
    """Integer search: least m >= 1 with x_abs * q_abs^m < 1."""
    for m in range(1, cap):
        if x_abs * q_abs ** m < 1.0:
            return m
    raise AssertionError("kappa search exhausted")


def brute_tau(r, terms=200):
    return 2.0 * sum(r ** (v * v / 2.0) for v in range(1, terms + 1))


def brute_euler_product(r, terms=2000):
    p = 1.0
    for m in range(1, terms + 1):
        p *= 1.0 - r ** m
    return p


# --- mpmath versions for high-q / high-accuracy work -----------------------

def mp_theta(q, x, dps=30):
    with mp.workdps(dps):
        q, x = mp.mpmathify(q), mp.mpmathify(x)
        s, j, peak = mp.mpf(0), 0, mp.mpf(0)
        while True:
            t = q ** (mp.mpf(j) * (j + 1) / 2) * x ** j
            s += t
            peak = max(peak, abs(t))
            if j > 3 and abs(t) < peak * mp.mpf(10) ** (-(dps + 8)) and abs(x) * abs(q) ** j < 0.5:
                return s
            j += 1


def mp_theta_dx(q, x, dps=30):
    with mp.workdps(dps):
        q, x = mp.mpmathify(q), mp.mpmathify(x)
        s, j, peak = mp.mpf(0), 1, mp.mpf(0)
        while True:
            t = j * q ** (mp.mpf(j) * (j + 1) / 2) * x ** (j - 1)
            s += t
            peak = max(peak, abs(t))
            if j > 4 and abs(t) < peak * mp.mpf(10) ** (-(dps + 8)) and abs(x) * abs(q) ** j < 0.5:
                return s
            j += 1


def first_confluence_by_bisection(q_lo=0.28, q_hi=0.35, dps=25):
    """Re-derive (q_1, zeta_1) from scratch by critical-value bisection.

    For fixed q the merging pair of real zeros brackets one critical point
    of theta on the negative axis; its critical value crosses zero exactly
    at the confluence.  Independent of every package code path.
    """
    with mp.workdps(dps):
        def crit_value(qq, seed):
            xc = mp.findroot(lambda x: mp_theta_dx(qq, x, dps), seed)
            return mp_theta(qq, xc, dps), xc

        lo, hi = mp.mpf(q_lo), mp.mpf(q_hi)
        d_lo, x_lo = crit_value(lo, mp.mpf(-6.5))
        d_hi, x_hi = crit_value(hi, mp.mpf(-8.0))
        assert d_lo < 0 < d_hi
        for _ in range(60):
            mid = (lo + hi) / 2
            d, xm = crit_value(mid, (x_lo + x_hi) / 2)
            if d < 0:
                lo, x_lo = mid, xm
            else:
                hi, x_hi = mid, xm
        qq = (lo + hi) / 2
        _, zz = crit_value(qq, (x_lo + x_hi) / 2)
        return float(qq), float(zz)


def assert_double_zero_mp(q, zeta, tol=1e-8):
    """A-posteriori oracle check that (q, zeta) really is a double zero."""
    t = mp_theta(q, zeta, dps=40)
    tx = mp_theta_dx(q, zeta, dps=40)
    txx = (mp_theta_dx(q, zeta + mp.mpf("1e-8"), dps=40)
           - mp_theta_dx(q, zeta - mp.mpf("1e-8"), dps=40)) / mp.mpf("2e-8")
    scale = max(1.0, abs(float(txx)))
    assert abs(float(t)) < tol * scale, (q, zeta, float(t))
    assert abs(float(tx)) < tol * scale, (q, zeta, float(tx))


E_PI = math.exp(math.pi)

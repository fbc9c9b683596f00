"""Complex special functions used by the series solutions.

Everything is built from two confluent hypergeometric kernels (the regular
power series and the irregular large-argument expansion) plus a Lanczos Gamma.
Bessel, Hankel and Coulomb wave functions are assembled from those through
their confluent hypergeometric representations, so a single precision policy
covers every basis the series solutions use.

Precision policy: each assembled value carries a running relative error
estimate (series cancellation, asymptotic truncation, Gamma-factor noise).
When the estimate exceeds ``rtol_fail`` (default 1e-8) the function raises
:class:`PrecisionLoss` instead of returning a silently bad number.

Scaling policy: public functions return plain complex values.  Internally a
log-scaled variant of each function is available, returning ``(L, rest)``
with value = exp(L) * rest and ``rest`` of moderate magnitude; series
evaluation uses those to combine terms whose Gamma/power prefactors exceed
double range even though each full term is tiny.
"""

import cmath
import math

from ._kernels import hyp_asym_sum, hyp_poly_sum, phi_series, rk_integrate

__all__ = [
    "ComplexFnError", "PoleError", "ParamPole", "GammaPole",
    "OriginSingularity", "PrecisionLoss",
    "gamma", "rgamma", "gammaln", "phi_hyp", "psi_hyp", "bessel_z",
    "coulomb_phi", "coulomb_psi", "leaver_normalization", "laguerre",
]

_EPS = 2.22e-16
_ASYM_SWITCH = 50.0


class ComplexFnError(ValueError):
    """Base class for special-function domain/precision failures."""


class PoleError(ComplexFnError):
    """Gamma evaluated at a nonpositive integer."""


class ParamPole(ComplexFnError):
    """Regular confluent series with c at a nonpositive integer."""


class GammaPole(ComplexFnError):
    """A Gamma factor of an assembled function sits at a pole."""


class OriginSingularity(ComplexFnError):
    """Function evaluated at an argument where it is singular."""


class PrecisionLoss(ComplexFnError):
    """Estimated relative error above the requested threshold."""


def _near_nonpos_int(z, tol=1e-9):
    zc = complex(z)
    k = round(zc.real)
    return k <= 0 and abs(zc - k) < tol


def _near_int(z, tol=1e-6):
    zc = complex(z)
    return abs(zc - round(zc.real)) < tol


def _sinpi(z):
    """sin(pi z) with argument reduction: full relative accuracy near the
    zeros at integer z, where cmath.sin(pi*z) only achieves absolute
    accuracy."""
    z = complex(z)
    k = round(z.real)
    w = z - k
    s = cmath.sin(math.pi * w)
    return -s if (k & 1) else s


def _cospi(z):
    # reduction through _sinpi keeps the zeros at half-odd z exact
    return _sinpi(0.5 - complex(z))


# ---------------------------------------------------------------------------
# Gamma


_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# Bernoulli-based Stirling coefficients B_{2n} / (2n (2n-1))
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
)


def gamma(z):
    """Gamma function for complex argument (Lanczos, reflection on Re z < 1/2).

    Raises PoleError within 1e-12 of a nonpositive integer.
    """
    z = complex(z)
    if _near_nonpos_int(z, 1e-12):
        raise PoleError(f"gamma pole at z={z}")
    if z.real < 0.5:
        return math.pi / (_sinpi(z) * gamma(1.0 - z))
    zz = z - 1.0
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (zz + i)
    t = zz + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (zz + 0.5) * cmath.exp(-t) * x


def rgamma(z):
    """1/Gamma, entire: returns exactly 0 within 1e-12 of nonpositive ints."""
    z = complex(z)
    if _near_nonpos_int(z, 1e-12):
        return 0.0 + 0.0j
    return 1.0 / gamma(z)


def gammaln(z):
    """A logarithm of Gamma suitable for ratios.

    exp(gammaln(z)) == gamma(z) up to double rounding, but the imaginary part
    is only defined modulo 2*pi on the left half plane (reflection uses
    principal logs).  Differences of gammaln values are therefore reliable in
    magnitude always, and in phase whenever the exponentiated combination is
    a single-valued expression, which is how the library uses them.
    """
    z = complex(z)
    if _near_nonpos_int(z, 1e-12):
        raise PoleError(f"gammaln pole at z={z}")
    if z.real < 0.5:
        return (math.log(math.pi) - cmath.log(_sinpi(z))
                - gammaln(1.0 - z))
    shift = 0.0 + 0.0j
    while abs(z) < 12.0:
        shift -= cmath.log(z)
        z = z + 1.0
    w = 1.0 / (z * z)
    s = _STIRLING[len(_STIRLING) - 1]
    for i in range(len(_STIRLING) - 2, -1, -1):
        s = s * w + _STIRLING[i]
    return ((z - 0.5) * cmath.log(z) - z
            + 0.5 * math.log(2.0 * math.pi) + s / z + shift)


def _pow(base, expo):
    """Principal-branch complex power with a guarded origin."""
    base = complex(base)
    expo = complex(expo)
    if base == 0:
        if expo == 0:
            return 1.0 + 0.0j
        if expo.real > 0:
            return 0.0 + 0.0j
        raise OriginSingularity("0 raised to a non-positive power")
    return cmath.exp(expo * cmath.log(base))


# ---------------------------------------------------------------------------
# Regular confluent hypergeometric function


def _phi_direct(a, c, y):
    val, absacc, _, status = phi_series(a, c, y, 1200)
    rel = _EPS * absacc / max(abs(val), 1e-300)
    if status != 0:
        rel = max(rel, 1e-2)
    return val, rel


def _phi_asym_log(a, c, y, rtol_fail):
    """Large-argument expansion, log-scaled: returns (L, rest, relerr)."""
    logy = cmath.log(y)
    sign = 1.0 if cmath.phase(y) > 0.0 else -1.0
    t1 = gammaln(c) - gammaln(a) + y + (a - c) * logy
    s1, r1, _, st1 = hyp_asym_sum(1.0 - a, c - a, 1.0 / y, 200)
    if _near_nonpos_int(a, 1e-12):
        t1 = -1e308 + 0.0j
        s1, r1, st1 = 0.0 + 0.0j, 0.0, 0
    t2 = gammaln(c) - gammaln(c - a) + sign * 1j * math.pi * a - a * logy
    s2, r2, _, st2 = hyp_asym_sum(a, a - c + 1.0, -1.0 / y, 200)
    if _near_nonpos_int(c - a, 1e-12):
        t2 = -1e308 + 0.0j
        s2, r2, st2 = 0.0 + 0.0j, 0.0, 0
    L = max(t1.real, t2.real)
    v1 = cmath.exp(t1 - L) * s1
    v2 = cmath.exp(t2 - L) * s2
    rest = v1 + v2
    if rest == 0:
        raise PrecisionLoss("large-argument expansion lost all signal")
    rel = (abs(v1) * max(r1, _EPS) + abs(v2) * max(r2, _EPS)) / abs(rest)
    if st1 == 1 or st2 == 1:
        rel = max(rel, 1e-2)
    return L, rest, rel


def _phi_bridge_log(a, c, y):
    """Regular function by seeding the power series at |y| = 10 on the ray
    through y (mild cancellation there) and integrating the confluent
    equation radially outward, the growing direction of the regular
    solution.  Expects Re y >= 0; None on integrator failure.

    The companion Frobenius solution grows like |y|^(1-Re c), so for
    Re c < 1 seed error is amplified by (|y|/10)^(1-Re c) along the path;
    that stiffness factor multiplies the returned error estimate."""
    if abs(y) <= 10.5:
        return None
    for rs in (10.0, 6.0, 4.0, 2.5):
        growth = max(0.0, 1.0 - c.real) * math.log(abs(y) / rs)
        if growth > 14.0:
            return None
        stiff = math.exp(growth)
        ys = y * (rs / abs(y))
        v0, e0 = _phi_direct(a, c, ys)
        v1, e1 = _phi_direct(a + 1.0, c + 1.0, ys)
        if max(e0, e1) <= 1e-10:
            break
    else:
        return None
    u, _, status, nst = rk_integrate(
        4, complex(a), complex(c), 0j, 0j, 0j, 0j, 0j,
        ys, v0, (a / c) * v1, y, 1e-13, 1e-290, 200000)
    if status != 0 or u == 0 or not abs(u) < 1e300:
        return None
    mag = abs(u)
    return math.log(mag), u / mag, (e0 + e1 + 1e-12 + nst * 1e-15) * stiff


def _phi_log(a, c, y, rtol_fail=1e-8):
    """(L, rest, relerr) with phi = exp(L) * rest."""
    a = complex(a)
    c = complex(c)
    y = complex(y)
    if _near_nonpos_int(c):
        raise ParamPole(f"regular confluent series undefined at c={c}")
    if y == 0:
        return 0.0, 1.0 + 0.0j, 0.0
    if _near_nonpos_int(a, 1e-12):
        val, rel = _phi_direct(a, c, y)
        return 0.0, val, rel
    if y.real < 0.0:
        # reflection to the right half plane controls series cancellation
        L, rest, rel = _phi_log(c - a, c, -y, rtol_fail)
        return y.real + L, cmath.exp(1j * y.imag) * rest, rel
    best = None
    if abs(y) > _ASYM_SWITCH:
        best = _phi_asym_log(a, c, y, rtol_fail)
        if best[2] <= rtol_fail:
            return best
    val, rel = _phi_direct(a, c, y)
    if not abs(val) < 1e308:
        val, rel = 0.0 + 0.0j, math.inf
    if best is None or rel < best[2]:
        best = (0.0, val, rel)
    if best[2] > 1e-10 and abs(y) > 10.5:
        out = _phi_bridge_log(a, c, y)
        if out is not None and out[2] < best[2]:
            best = out
    return best


def phi_hyp(a, c, y, rtol_fail=1e-8):
    """Regular confluent hypergeometric function of complex (a, c, y).

    Power series with the reflection to positive Re y for cancellation
    control, large-argument expansion beyond |y| = 50.  Terminating cases
    (a a nonpositive integer) are summed exactly.
    """
    L, rest, rel = _phi_log(a, c, y, rtol_fail)
    if rel > rtol_fail:
        raise PrecisionLoss(
            f"phi_hyp relative error ~{rel:.2e} exceeds {rtol_fail:.2e} "
            f"at a={a}, c={c}, y={y}")
    return cmath.exp(L) * rest


# ---------------------------------------------------------------------------
# Irregular confluent hypergeometric function


def _psi_seed_log(a, c, y, max_m):
    """Inverse-argument expansion of the irregular function; None when it
    fails to converge at this radius."""
    s, r, _, status = hyp_asym_sum(a, a - c + 1.0, -1.0 / y, max_m)
    if status == 1:
        return None
    t = -a * cmath.log(y)
    return t.real, cmath.exp(1j * t.imag) * s, max(r, _EPS)


def _psi_two_phi_log(a, c, y):
    """Gamma-pair combination in terms of two regular series (noninteger c).
    The reported rel tracks the cancellation between the pair, which grows
    like e^(Re y) on the right half plane."""
    La1, ra1, rel1 = _phi_log(a, c, y, rtol_fail=1.0)
    La2, ra2, rel2 = _phi_log(a - c + 1.0, 2.0 - c, y, rtol_fail=1.0)
    if _near_nonpos_int(a - c + 1.0, 1e-12):
        t1 = -1e308 + 0.0j
        v1rel = 0.0
    else:
        t1 = gammaln(1.0 - c) - gammaln(a - c + 1.0) + La1
        v1rel = rel1
    if _near_nonpos_int(a, 1e-12):
        t2 = -1e308 + 0.0j
        v2rel = 0.0
    else:
        t2 = gammaln(c - 1.0) - gammaln(a) + (1.0 - c) * cmath.log(y) + La2
        v2rel = rel2
    L = max(t1.real, t2.real)
    v1 = cmath.exp(t1 - L) * ra1
    v2 = cmath.exp(t2 - L) * ra2
    rest = v1 + v2
    if rest == 0:
        return L, rest, math.inf
    rel = (abs(v1) * (v1rel + _EPS) + abs(v2) * (v2rel + _EPS)) / abs(rest)
    return L, rest, rel


def _psi_bridge_log(a, c, y):
    """Irregular function by seeding the inverse-argument expansion far out
    on the ray through y and integrating the confluent equation radially
    inward.  Stable on the right half plane, where the regular solution
    decays inward; None when no admissible seed radius exists."""
    aq = abs(a * (a - c + 1.0))
    R = max(_ASYM_SWITCH, 2.0 * aq, 1.25 * abs(y))
    # inward magnitude growth |y|^(-Re a) must stay within double range
    if a.real * math.log(R / abs(y)) > 500.0:
        return None
    seed0 = seed1 = None
    for _ in range(4):
        w_far = y * (R / abs(y))
        seed0 = _psi_seed_log(a, c, w_far, 600)
        seed1 = _psi_seed_log(a + 1.0, c + 1.0, w_far, 600)
        if (seed0 is not None and seed1 is not None
                and max(seed0[2], seed1[2]) <= 1e-13):
            break
        R *= 2.0
        seed0 = None
    if seed0 is None or seed1 is None:
        return None
    L0, v0, e0 = seed0
    L1, v1, e1 = seed1
    g = v0
    gp = -a * cmath.exp(L1 - L0) * v1
    u, _, status, nst = rk_integrate(
        4, complex(a), complex(c), 0j, 0j, 0j, 0j, 0j,
        w_far, g, gp, y, 1e-13, 1e-290, 200000)
    if status != 0 or u == 0:
        return None
    # growing-solution contamination: e^w y^(2a-c) relative to y^(-a),
    # evaluated end over seed; decays inward off the right half plane and
    # stays bounded on the imaginary axis unless Re(2a-c) < 0
    t = (y - w_far).real + (2.0 * a - c).real * math.log(abs(y) / R)
    stiff = math.exp(min(700.0, max(0.0, t)))
    mag = abs(u)
    return L0 + math.log(mag), u / mag, (e0 + e1 + 1e-12 + nst * 1e-15) * stiff


def _psi_left_log(a, c, y, rtol_fail):
    """Irregular function on the left half plane through the regular one:

        Psi(a,c;y) = Gamma(c-a) e^{s i pi a} [ Phi(a,c;y)/Gamma(c)
                     - e^{s i pi (c-a)}/Gamma(a) e^y Psi(c-a,c;y e^{s i pi}) ]

    with s chosen so the rotated argument lands on the right half plane.
    There the regular term dominates and the reflected irregular term is
    exponentially suppressed, so the e^(|Re y|) cancellation of the
    two-series formula never appears.  None when the connection degenerates.
    """
    if c.real < 1.0:
        out = _psi_left_log(a - c + 1.0, 2.0 - c, y, rtol_fail)
        if out is None:
            return None
        L, rest, rel = out
        t = (1.0 - c) * cmath.log(y)
        return L + t.real, cmath.exp(1j * t.imag) * rest, rel
    if _near_nonpos_int(c - a, 1e-9):
        return None
    s = 1.0 if y.imag < 0.0 else -1.0
    yh = y * cmath.exp(s * 1j * math.pi)
    La1, ra1, rel1 = _phi_log(a, c, y, rtol_fail=1.0)
    t1 = s * 1j * math.pi * a + gammaln(c - a) - gammaln(c) + La1
    if _near_nonpos_int(a, 1e-12):
        t2 = -1e308 + 0.0j
        ra2 = 0.0 + 0.0j
        rel2 = 0.0
    else:
        La2, ra2, rel2 = _psi_log(c - a, c, yh, rtol_fail)
        t2 = (s * 1j * math.pi * c + gammaln(c - a) - gammaln(a) + y + La2)
    L = max(t1.real, t2.real)
    v1 = cmath.exp(t1 - L) * ra1
    v2 = cmath.exp(t2 - L) * ra2
    rest = v1 - v2
    if rest == 0:
        return None
    rel = (abs(v1) * (rel1 + _EPS) + abs(v2) * (rel2 + _EPS)) / abs(rest)
    return L, rest, rel


def _psi_log(a, c, y, rtol_fail=1e-8):
    a = complex(a)
    c = complex(c)
    y = complex(y)
    if y == 0:
        raise OriginSingularity("irregular confluent function at y=0")
    if _near_nonpos_int(a - c + 1.0, 1e-9):
        # the inverse-argument expansion terminates: exact for every y != 0,
        # integer c included (covers the spherical/half-odd-order cylinder
        # functions)
        m_end = -int(round((a - c + 1.0).real))
        s, r = hyp_poly_sum(complex(a), complex(a - c + 1.0), -1.0 / y, m_end)
        t = -a * cmath.log(y)
        return t.real, cmath.exp(1j * t.imag) * s, max(r, _EPS)
    best = None
    if abs(y) > _ASYM_SWITCH:
        best = _psi_seed_log(a, c, y, 300)
        if best is not None and best[2] <= rtol_fail:
            return best
    if not _near_int(c, 1e-6):
        out = _psi_two_phi_log(a, c, y)
    else:
        # the two-series formula degenerates at integer c; average symmetric
        # c offsets (the function is entire in c)
        d = 1e-5
        La, ra, ea = _psi_two_phi_log(a, c + d, y)
        Lb, rb, eb = _psi_two_phi_log(a, c - d, y)
        L = max(La, Lb)
        rest = 0.5 * (cmath.exp(La - L) * ra + cmath.exp(Lb - L) * rb)
        if rest == 0:
            out = (L, rest, math.inf)
        else:
            out = (L, rest, max(ea, eb) + 1e-10)
    if best is None or out[2] < best[2]:
        best = out
    # escalate against an absolute bar: the two-series estimate can be a
    # couple of orders optimistic near the Gamma poles
    if best[2] > 1e-10:
        try:
            if y.real >= 0.0 and abs(y) > 0.25:
                out = _psi_bridge_log(a, c, y)
            elif y.real < 0.0:
                out = _psi_left_log(a, c, y, rtol_fail)
            else:
                out = None
        except ComplexFnError:
            out = None
        if out is not None and out[2] < best[2]:
            best = out
    if best[1] == 0:
        raise PrecisionLoss(f"psi_hyp lost all signal at a={a}, c={c}, y={y}")
    return best


def psi_hyp(a, c, y, rtol_fail=1e-8):
    """Irregular confluent hypergeometric function of complex (a, c, y).

    Route selection: terminating inverse-argument sum when it exists (exact),
    asymptotic expansion beyond |y| = 50, Gamma-weighted combination of two
    regular series for moderate |y| (symmetric c-offset average at integer c,
    where that formula degenerates), and on the right half plane, where the
    two-series combination cancels like e^(Re y), an inward integration of
    the confluent equation seeded by the asymptotic expansion far out on the
    same ray.  Principal branch on the whole cut plane.
    """
    L, rest, rel = _psi_log(a, c, y, rtol_fail)
    if rel > rtol_fail:
        raise PrecisionLoss(
            f"psi_hyp relative error ~{rel:.2e} exceeds {rtol_fail:.2e} "
            f"at a={a}, c={c}, y={y}")
    return cmath.exp(L) * rest


# ---------------------------------------------------------------------------
# Cylinder functions (via the confluent representations)


def _j_log(kappa, y, rtol_fail):
    """log-scaled J_kappa(y) through the regular confluent series."""
    kappa = complex(kappa)
    y = complex(y)
    if y == 0:
        if kappa == 0:
            return 0.0, 1.0 + 0.0j, 0.0
        if kappa.real > 0:
            return -1e308, 0.0 + 0.0j, 0.0
        raise OriginSingularity("J of nonpositive order at y=0")
    pre = kappa * cmath.log(0.5 * y) - gammaln(kappa + 1.0) + 1j * y
    L, rest, rel = _phi_log(kappa + 0.5, 2.0 * kappa + 1.0, -2.0j * y,
                            rtol_fail=1.0)
    return pre.real + L, cmath.exp(1j * pre.imag) * rest, rel


def _j_log_safe(kappa, y, rtol_fail):
    """As _j_log but sidesteps c = 2 kappa + 1 at nonpositive integers by a
    symmetric order offset (J is entire in the order; error O(1e-10))."""
    if _near_nonpos_int(2.0 * complex(kappa) + 1.0, 1e-7):
        d = 1e-5
        La, ra, rela = _j_log(complex(kappa) + d, y, rtol_fail)
        Lb, rb, relb = _j_log(complex(kappa) - d, y, rtol_fail)
        L = max(La, Lb)
        rest = 0.5 * (cmath.exp(La - L) * ra + cmath.exp(Lb - L) * rb)
        return L, rest, max(rela, relb) + 1e-10
    return _j_log(kappa, y, rtol_fail)


def _hankel_log(kind, kappa, y, rtol_fail):
    """log-scaled Hankel functions through the irregular representation.

    The representation is a principal-branch identity only on a half plane
    (outgoing: arg y > -pi/2, incoming: arg y < pi/2); outside it the value
    is reached through the half-turn connection formulas, whose two terms
    land inside the valid sector.
    """
    kappa = complex(kappa)
    y = complex(y)
    if y == 0:
        raise OriginSingularity("Hankel function at y=0")
    ph = cmath.phase(y)
    if kind == 3 and ph <= -math.pi / 2.0:
        L1, r1, e1 = _hankel_log(4, kappa, -y, rtol_fail)
        L2, r2, e2 = _hankel_log(3, kappa, -y, rtol_fail)
        L = max(L1, L2)
        rest = (cmath.exp(-1j * math.pi * kappa) * cmath.exp(L1 - L) * r1
                + 2.0 * _cospi(kappa) * cmath.exp(L2 - L) * r2)
        if rest == 0:
            raise PrecisionLoss("hankel rotation lost all signal")
        rel = ((abs(r1) * cmath.exp(L1 - L).real * (e1 + _EPS)
                + 2.0 * abs(_cospi(kappa)) * abs(r2)
                * cmath.exp(L2 - L).real * (e2 + _EPS)) / abs(rest))
        return L, rest, rel
    if kind == 4 and ph > math.pi / 2.0:
        L1, r1, e1 = _hankel_log(3, kappa, -y, rtol_fail)
        L2, r2, e2 = _hankel_log(4, kappa, -y, rtol_fail)
        L = max(L1, L2)
        rest = (cmath.exp(1j * math.pi * kappa) * cmath.exp(L1 - L) * r1
                + 2.0 * _cospi(kappa) * cmath.exp(L2 - L) * r2)
        if rest == 0:
            raise PrecisionLoss("hankel rotation lost all signal")
        rel = ((abs(r1) * cmath.exp(L1 - L).real * (e1 + _EPS)
                + 2.0 * abs(_cospi(kappa)) * abs(r2)
                * cmath.exp(L2 - L).real * (e2 + _EPS)) / abs(rest))
        return L, rest, rel
    if kind == 3:
        pre = ((kappa + 1.0) * math.log(2.0) - 1j * math.pi * kappa
               - 0.5 * math.log(math.pi) + 1j * y + kappa * cmath.log(y))
        L, rest, rel = _psi_log(kappa + 0.5, 2.0 * kappa + 1.0, -2.0j * y,
                                rtol_fail=rtol_fail)
        phase = -1.0j
    else:
        pre = ((kappa + 1.0) * math.log(2.0) + 1j * math.pi * kappa
               - 0.5 * math.log(math.pi) - 1j * y + kappa * cmath.log(y))
        L, rest, rel = _psi_log(kappa + 0.5, 2.0 * kappa + 1.0, 2.0j * y,
                                rtol_fail=rtol_fail)
        phase = 1.0j
    return pre.real + L, phase * cmath.exp(1j * pre.imag) * rest, rel


def _hankel_safe_log(kind, kappa, y, rtol_fail):
    """Hankel dispatch: negative half-odd orders reflect onto the terminating
    positive half-odd representation (exact); everything else goes straight
    through, the irregular function handling its own integer-c degeneracy."""
    kappa = complex(kappa)
    if kappa.real < 0.0 and (_near_int(kappa - 0.5, 1e-9)
                             or _near_int(kappa, 1e-9)):
        # H1_{-mu} = e^{i pi mu} H1_mu, H2_{-mu} = e^{-i pi mu} H2_mu
        mu = -kappa
        L, rest, rel = _hankel_log(kind, mu, y, rtol_fail)
        f = cmath.exp(1j * math.pi * mu) if kind == 3 \
            else cmath.exp(-1j * math.pi * mu)
        return L, f * rest, rel
    return _hankel_log(kind, kappa, y, rtol_fail)


def _y_from_hankel_log(kappa, y, rtol_fail):
    L1, r1, e1 = _hankel_safe_log(3, kappa, y, rtol_fail)
    L2, r2, e2 = _hankel_safe_log(4, kappa, y, rtol_fail)
    L = max(L1, L2)
    v1 = cmath.exp(L1 - L) * r1
    v2 = cmath.exp(L2 - L) * r2
    rest = (v1 - v2) / 2.0j
    if rest == 0:
        raise PrecisionLoss("cylinder function lost all signal")
    rel = 0.5 * (abs(v1) * (e1 + _EPS) + abs(v2) * (e2 + _EPS)) / abs(rest)
    return L, rest, rel


def _bessel_log(kind, kappa, y, rtol_fail=1e-8):
    """(L, rest, relerr) for J (1), Y (2), H1 (3), H2 (4) of complex order."""
    kappa = complex(kappa)
    y = complex(y)
    if kind == 1:
        if _near_int(kappa, 1e-12) and kappa.real < -0.5:
            # exact negative integer order: J_{-m} = (-1)^m J_m
            m = int(round(kappa.real))
            L, rest, rel = _j_log(complex(-m), y, rtol_fail)
            return L, (-1.0) ** m * rest, rel
        if _near_int(kappa + 0.5, 1e-12) and kappa.real < 0.0:
            # exact negative half-odd order: J_{-m-1/2} = (-1)^{m+1} Y_{m+1/2}
            mu = -kappa
            m = int(round(mu.real - 0.5))
            L, rest, rel = _y_from_hankel_log(mu, y, rtol_fail)
            return L, (-1.0) ** (m + 1) * rest, rel
        return _j_log_safe(kappa, y, rtol_fail)
    if kind == 2:
        if _near_int(kappa, 1e-12) and kappa.real < -0.5:
            # exact negative integer order: Y_{-m} = (-1)^m Y_m
            m = int(round(kappa.real))
            L, rest, rel = _y_from_hankel_log(complex(-m), y, rtol_fail)
            return L, (-1.0) ** m * rest, rel
        if _near_int(kappa + 0.5, 1e-12) and kappa.real < 0.0:
            # exact negative half-odd order: Y_{-m-1/2} = (-1)^m J_{m+1/2}
            mu = -kappa
            m = int(round(mu.real - 0.5))
            L, rest, rel = _j_log(mu, y, rtol_fail)
            return L, (-1.0) ** m * rest, rel
        return _y_from_hankel_log(kappa, y, rtol_fail)
    return _hankel_safe_log(kind, kappa, y, rtol_fail)


def bessel_z(kind, kappa, y, rtol_fail=1e-8):
    """Cylinder function Z^(kind) of complex order and argument.

    kind: 1 first kind, 2 second kind, 3/4 third kind (outgoing/incoming).
    First kind through the regular confluent series; third kind through the
    irregular function; second kind by the third-kind difference.  Orders at
    the representation's integer degeneracies go through exact reflections
    (negative integer / half-odd orders) or a symmetric order offset (the
    functions are entire in the order).
    """
    if kind not in (1, 2, 3, 4):
        raise ValueError(f"kind must be 1..4, got {kind}")
    L, rest, rel = _bessel_log(kind, kappa, y, rtol_fail)
    if rel > rtol_fail:
        raise PrecisionLoss(
            f"bessel_z relative error ~{rel:.2e} exceeds {rtol_fail:.2e} "
            f"at kind={kind}, kappa={kappa}, y={y}")
    return cmath.exp(L) * rest


# ---------------------------------------------------------------------------
# Coulomb wave family


def _coulomb_phi_log(kappa, eta, y, rtol_fail=1e-8):
    kappa = complex(kappa)
    eta = complex(eta)
    y = complex(y)
    if _near_nonpos_int(2.0 * kappa + 2.0, 1e-9):
        raise GammaPole(
            f"coulomb_phi normalization 1/Gamma(2n+2nu+2) at a pole "
            f"(kappa={kappa})")
    if y == 0:
        if (kappa + 1.0).real > 0:
            return -1e308, 0.0 + 0.0j, 0.0
        raise OriginSingularity("coulomb_phi at y=0 with Re(kappa+1) <= 0")
    pre = 1j * y + (kappa + 1.0) * cmath.log(2j * y) - gammaln(2.0 * kappa + 2.0)
    L, rest, rel = _phi_log(kappa + 1.0 + 1j * eta, 2.0 * kappa + 2.0,
                            -2.0j * y, rtol_fail=rtol_fail)
    return pre.real + L, cmath.exp(1j * pre.imag) * rest, rel


def coulomb_phi(kappa, eta, y, rtol_fail=1e-8):
    """Regular Coulomb-type wave function of complex degree kappa.

    Normalized as exp(iy) (2iy)^(kappa+1) Phi(kappa+1+i eta, 2 kappa+2; -2iy)
    / Gamma(2 kappa + 2).
    """
    L, rest, rel = _coulomb_phi_log(kappa, eta, y, rtol_fail)
    if rel > rtol_fail:
        raise PrecisionLoss(
            f"coulomb_phi relative error ~{rel:.2e} exceeds {rtol_fail:.2e}")
    return cmath.exp(L) * rest


def _coulomb_psi_log(sign, kappa, eta, y, rtol_fail=1e-8):
    kappa = complex(kappa)
    eta = complex(eta)
    y = complex(y)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if y == 0:
        raise OriginSingularity("coulomb_psi at y=0")
    g_arg = kappa + 1.0 - sign * 1j * eta
    if _near_nonpos_int(g_arg, 1e-9):
        raise GammaPole(
            f"coulomb_psi normalization 1/Gamma(kappa+1-+i eta) at a pole "
            f"(argument {g_arg})")
    pre = (math.log(2.0) + math.pi * eta + sign * 1j * y
           + (kappa + 1.0) * cmath.log(-2j * y) - gammaln(g_arg))
    L, rest, rel = _psi_log(kappa + 1.0 + sign * 1j * eta,
                            2.0 * kappa + 2.0, -sign * 2.0j * y,
                            rtol_fail=rtol_fail)
    unit = sign * 1j * cmath.exp(1j * pre.imag)
    return pre.real + L, unit * rest, rel


def coulomb_psi(sign, kappa, eta, y, rtol_fail=1e-8):
    """Irregular Coulomb-type wave functions (sign = +1 or -1).

    Normalized as +-2i exp(eta pi) exp(+-iy) (-2iy)^(kappa+1)
    Psi(kappa+1 +- i eta, 2 kappa+2; -+2iy) / Gamma(kappa+1 -+ i eta).
    """
    L, rest, rel = _coulomb_psi_log(sign, kappa, eta, y, rtol_fail)
    if rel > rtol_fail:
        raise PrecisionLoss(
            f"coulomb_psi relative error ~{rel:.2e} exceeds {rtol_fail:.2e}")
    return cmath.exp(L) * rest


def leaver_normalization(n, nu, eta):
    """Connection constant between the regular and irregular Coulomb pair.

    (1/2) e^(-eta pi/2) (-i)^(n+nu+1)
    sqrt(Gamma(n+nu+1+i eta) Gamma(n+nu+1-i eta)); the square root is
    principal, so the result is defined up to sign like any square root.
    """
    nu = complex(nu)
    eta = complex(eta)
    kap = n + nu
    for arg in (kap + 1.0 + 1j * eta, kap + 1.0 - 1j * eta):
        if _near_nonpos_int(arg, 1e-12):
            raise GammaPole(f"leaver_normalization Gamma({arg}) at a pole")
    half = 0.5 * (gammaln(kap + 1.0 + 1j * eta) + gammaln(kap + 1.0 - 1j * eta))
    return (0.5 * cmath.exp(-0.5 * math.pi * eta)
            * cmath.exp((kap + 1.0) * (-0.5j * math.pi)) * cmath.exp(half))


def laguerre(ell, alpha, y):
    """Generalized Laguerre polynomial via the terminating regular series."""
    if not isinstance(ell, int) or ell < 0:
        raise ValueError(f"degree must be a nonnegative integer, got {ell}")
    alpha = complex(alpha)
    if _near_nonpos_int(alpha + 1.0, 1e-12):
        raise ParamPole(f"laguerre undefined at alpha={alpha}")
    coef = 1.0 + 0.0j
    for k in range(1, ell + 1):
        coef *= (alpha + k) / k
    return coef * phi_hyp(complex(-ell), alpha + 1.0, y)

"""Low-level numerical kernels.

Every function here is a scalar/array loop compiled with numba when available
(see :mod:`heunser._jit`).  Kernels use elementary arithmetic only; special
function assembly, branch handling and error policy live in
:mod:`heunser.complexfn` and above.
"""

import numpy as np

from ._jit import maybe_njit

_TINY = 1e-30


@maybe_njit(cache=True)
def lentz_cf(aa, bb, eps, min_terms):
    """Evaluate bb[0] + K_{m>=1}(aa[m]/bb[m]) by the modified Lentz method.

    Returns (value, last |delta-1|, number of partial numerators consumed).
    Stops early once |delta-1| < eps after at least min_terms links.
    """
    f = bb[0]
    if abs(f) < _TINY:
        f = _TINY + 0j
    c = f
    d = 0.0 + 0.0j
    delta_gap = 1.0
    m_used = 0
    for m in range(1, len(aa)):
        d = bb[m] + aa[m] * d
        if abs(d) < _TINY:
            d = _TINY + 0j
        c = bb[m] + aa[m] / c
        if abs(c) < _TINY:
            c = _TINY + 0j
        d = 1.0 / d
        delta = c * d
        f = f * delta
        delta_gap = abs(delta - 1.0)
        m_used = m
        if m >= min_terms and delta_gap < eps:
            break
    return f, delta_gap, m_used


@maybe_njit(cache=True)
def tridiag_det(alpha, beta, gamma):
    """Normalized determinant of the tridiagonal matrix with diagonal beta,
    superdiagonal alpha (row k couples to k+1) and subdiagonal gamma (row k
    couples to k-1).

    The three-term determinant recursion is rescaled at every step, so the
    returned value is a bounded function of the inputs whose zeros coincide
    with the zeros of the true determinant.
    """
    dm1 = 1.0 + 0.0j
    d0 = beta[0]
    s = abs(d0)
    if s > 0.0:
        dm1 = dm1 / s
        d0 = d0 / s
    for k in range(1, len(beta)):
        d1 = beta[k] * d0 - gamma[k] * alpha[k - 1] * dm1
        s = abs(d1)
        if s < abs(d0):
            s = abs(d0)
        if s > 0.0:
            d1 = d1 / s
            d0 = d0 / s
        dm1 = d0
        d0 = d1
    return d0


@maybe_njit(cache=True)
def phi_series(a, c, y, max_terms):
    """Power series for the regular confluent hypergeometric function.

    Returns (sum, sum of |terms|, terms used, status).  status 0 means the
    series converged (or terminated exactly); 1 means max_terms was hit.
    """
    term = 1.0 + 0.0j
    acc = 1.0 + 0.0j
    absacc = 1.0
    small = 0
    m = 0
    while m < max_terms:
        term = term * (a + m) / ((c + m) * (m + 1.0)) * y
        acc = acc + term
        absacc = absacc + abs(term)
        m += 1
        if term == 0.0:
            return acc, absacc, m, 0
        if abs(term) <= 1e-16 * abs(acc):
            small += 1
            if small >= 3:
                return acc, absacc, m, 0
        else:
            small = 0
    return acc, absacc, m, 1


@maybe_njit(cache=True)
def hyp_asym_sum(p, q, w, max_m):
    """Sum_{m>=0} (p)_m (q)_m / m! * w^m with optimal truncation.

    Used by the large-argument expansions (w = +-1/y).  Returns
    (sum, relative size of the first neglected/last term, terms used, status):
    status 0 converged below machine precision, 2 truncated at the smallest
    term (asymptotic tail), 1 ran out of terms.
    """
    term = 1.0 + 0.0j
    acc = 1.0 + 0.0j
    m = 0
    while m < max_m:
        new = term * (p + m) * (q + m) / (m + 1.0) * w
        if abs(new) < 1e-17 * abs(acc):
            acc = acc + new
            rel = abs(new) / max(abs(acc), 1e-300)
            return acc, rel, m + 1, 0
        if m > 2 and abs(new) >= abs(term):
            rel = abs(term) / max(abs(acc), 1e-300)
            return acc, rel, m, 2
        term = new
        acc = acc + term
        m += 1
    rel = abs(term) / max(abs(acc), 1e-300)
    return acc, rel, m, 1


@maybe_njit(cache=True)
def hyp_poly_sum(p, q, w, m_end):
    """Sum_{m=0}^{m_end} (p)_m (q)_m / m! * w^m summed exactly (terminating
    series; the caller guarantees (q)_m vanishes beyond m_end).

    Returns (sum, cancellation-based relative error estimate).
    """
    term = 1.0 + 0.0j
    acc = 1.0 + 0.0j
    absacc = 1.0
    for m in range(m_end):
        term = term * (p + m) * (q + m) / (m + 1.0) * w
        acc = acc + term
        absacc = absacc + abs(term)
    return acc, 2.22e-16 * absacc / max(abs(acc), 1e-300)


@maybe_njit(cache=True)
def ode_rhs_upp(code, B1, B2, B3, z0, omega, eta, q, z, u, s):
    """Second derivative from the governing equation.

    code: 0 z(z-z0)U'' + (B1+B2 z)U' + [B3 - 2 eta omega (z-z0)
             + omega^2 z(z-z0)]U = 0
          1 z^2 U''    + (B1+B2 z)U' + [B3 - 2 eta omega z + omega^2 z^2]U = 0
          2 z(z-z0)U'' + (B1+B2 z)U' + [B3 + q(z-z0)]U = 0
          3 z^2 U''    + (B1+B2 z)U' + [B3 + q z]U = 0
          4 z U''      + (B2 - z)U'  - B1 U = 0   (confluent hypergeometric)
    """
    if code == 0:
        den = z * (z - z0)
        cz = B3 - 2.0 * eta * omega * (z - z0) + omega * omega * z * (z - z0)
    elif code == 1:
        den = z * z
        cz = B3 - 2.0 * eta * omega * z + omega * omega * z * z
    elif code == 2:
        den = z * (z - z0)
        cz = B3 + q * (z - z0)
    elif code == 3:
        den = z * z
        cz = B3 + q * z
    else:
        return (B1 * u - (B2 - z) * s) / z
    return -((B1 + B2 * z) * s + cz * u) / den


@maybe_njit(cache=True)
def rk_integrate(code, B1, B2, B3, z0, omega, eta, q,
                 za, ua, sa, zb, rtol, atol, max_steps):
    """Integrate U'' = f(z, U, U') along the straight segment za -> zb with a
    Dormand-Prince 5(4) embedded pair.

    Returns (U(zb), U'(zb), status, steps).  status: 0 ok, 1 step budget
    exhausted, 2 step size underflow.
    """
    dz = zb - za
    t = 0.0
    h = 0.01
    u = ua
    s = sa
    nsteps = 0
    k1u = s * dz
    k1s = ode_rhs_upp(code, B1, B2, B3, z0, omega, eta, q, za, u, s) * dz
    while t < 1.0:
        if nsteps >= max_steps:
            return u, s, 1, nsteps
        if h < 1e-14:
            return u, s, 2, nsteps
        if t + h > 1.0:
            h = 1.0 - t
        z = za + t * dz

        u2 = u + h * (0.2 * k1u)
        s2 = s + h * (0.2 * k1s)
        k2u = s2 * dz
        k2s = ode_rhs_upp(code, B1, B2, B3, z0, omega, eta, q,
                          za + (t + 0.2 * h) * dz, u2, s2) * dz

        u3 = u + h * (0.075 * k1u + 0.225 * k2u)
        s3 = s + h * (0.075 * k1s + 0.225 * k2s)
        k3u = s3 * dz
        k3s = ode_rhs_upp(code, B1, B2, B3, z0, omega, eta, q,
                          za + (t + 0.3 * h) * dz, u3, s3) * dz

        u4 = u + h * ((44.0 / 45.0) * k1u - (56.0 / 15.0) * k2u
                      + (32.0 / 9.0) * k3u)
        s4 = s + h * ((44.0 / 45.0) * k1s - (56.0 / 15.0) * k2s
                      + (32.0 / 9.0) * k3s)
        k4u = s4 * dz
        k4s = ode_rhs_upp(code, B1, B2, B3, z0, omega, eta, q,
                          za + (t + 0.8 * h) * dz, u4, s4) * dz

        u5 = u + h * ((19372.0 / 6561.0) * k1u - (25360.0 / 2187.0) * k2u
                      + (64448.0 / 6561.0) * k3u - (212.0 / 729.0) * k4u)
        s5 = s + h * ((19372.0 / 6561.0) * k1s - (25360.0 / 2187.0) * k2s
                      + (64448.0 / 6561.0) * k3s - (212.0 / 729.0) * k4s)
        k5u = s5 * dz
        k5s = ode_rhs_upp(code, B1, B2, B3, z0, omega, eta, q,
                          za + (t + (8.0 / 9.0) * h) * dz, u5, s5) * dz

        u6 = u + h * ((9017.0 / 3168.0) * k1u - (355.0 / 33.0) * k2u
                      + (46732.0 / 5247.0) * k3u + (49.0 / 176.0) * k4u
                      - (5103.0 / 18656.0) * k5u)
        s6 = s + h * ((9017.0 / 3168.0) * k1s - (355.0 / 33.0) * k2s
                      + (46732.0 / 5247.0) * k3s + (49.0 / 176.0) * k4s
                      - (5103.0 / 18656.0) * k5s)
        k6u = s6 * dz
        k6s = ode_rhs_upp(code, B1, B2, B3, z0, omega, eta, q,
                          za + (t + h) * dz, u6, s6) * dz

        un = u + h * ((35.0 / 384.0) * k1u + (500.0 / 1113.0) * k3u
                      + (125.0 / 192.0) * k4u - (2187.0 / 6784.0) * k5u
                      + (11.0 / 84.0) * k6u)
        sn = s + h * ((35.0 / 384.0) * k1s + (500.0 / 1113.0) * k3s
                      + (125.0 / 192.0) * k4s - (2187.0 / 6784.0) * k5s
                      + (11.0 / 84.0) * k6s)
        k7u = sn * dz
        k7s = ode_rhs_upp(code, B1, B2, B3, z0, omega, eta, q,
                          za + (t + h) * dz, un, sn) * dz

        eu = h * ((71.0 / 57600.0) * k1u - (71.0 / 16695.0) * k3u
                  + (71.0 / 1920.0) * k4u - (17253.0 / 339200.0) * k5u
                  + (22.0 / 525.0) * k6u - (1.0 / 40.0) * k7u)
        es = h * ((71.0 / 57600.0) * k1s - (71.0 / 16695.0) * k3s
                  + (71.0 / 1920.0) * k4s - (17253.0 / 339200.0) * k5s
                  + (22.0 / 525.0) * k6s - (1.0 / 40.0) * k7s)

        sc_u = atol + rtol * max(abs(u), abs(un))
        sc_s = atol + rtol * max(abs(s), abs(sn))
        err = max(abs(eu) / sc_u, abs(es) / sc_s)
        nsteps += 1
        if err <= 1.0:
            t += h
            u = un
            s = sn
            k1u = k7u
            k1s = k7s
        if err == 0.0:
            fac = 5.0
        else:
            fac = 0.9 * err ** (-0.2)
            if fac < 0.2:
                fac = 0.2
            elif fac > 5.0:
                fac = 5.0
        h = h * fac
    return u, s, 0, nsteps


@maybe_njit(cache=True)
def numerov_sweep(E, V, h, psi0, psi1):
    """Propagate psi'' = (V - E) psi on a uniform grid by the Numerov scheme.

    Returns (psi at the last grid point, node count, running max |psi|),
    with psi_end and the max sharing one overall positive rescaling so the
    ratio is meaningful.
    """
    c = h * h / 12.0
    g0 = V[0] - E
    g1 = V[1] - E
    y0 = psi0
    y1 = psi1
    nodes = 0
    maxa = max(abs(y0), abs(y1))
    for k in range(2, len(V)):
        g2 = V[k] - E
        y2 = (y1 * (2.0 + 10.0 * c * g1) - y0 * (1.0 - c * g0)) / (1.0 - c * g2)
        if (y2 > 0.0 and y1 < 0.0) or (y2 < 0.0 and y1 > 0.0):
            nodes += 1
        a = abs(y2)
        if a > maxa:
            maxa = a
        if a > 1e250:
            y2 = y2 * 1e-250
            y1 = y1 * 1e-250
            maxa = maxa * 1e-250
        y0 = y1
        y1 = y2
        g0 = g1
        g1 = g2
    return y1, nodes, maxa

"""Equation parameter records, transformations, limit maps and reductions.

Four confluent-Heun-type equations are supported, all in the form used by
the series machinery:

  che     z(z-z0) U'' + (B1 + B2 z) U' + [B3 - 2 eta omega (z-z0)
          + omega^2 z (z-z0)] U = 0
  dche    z^2 U'' + (B1 + B2 z) U' + (B3 - 2 eta omega z
          + omega^2 z^2) U = 0
  wiche   z(z-z0) U'' + (B1 + B2 z) U' + [B3 + q (z-z0)] U = 0
  widche  z^2 U'' + (B1 + B2 z) U' + (B3 + q z) U = 0

Each family carries a small group of variable/parameter substitutions that
map solutions to solutions, and the classical Mathieu, Whittaker-Hill,
spheroidal and quasi-exactly-solvable Schrodinger problems reduce to
particular parameter records.  Everything here is an immutable value type;
the numerics live elsewhere.
"""

import cmath
import math
import warnings
from dataclasses import dataclass, field


class InvalidLimit(ValueError):
    """A limit map applied to parameters that do not admit it."""


class UnsupportedReduction(ValueError):
    """A source problem asked to reduce to a target it cannot reach."""


def _c(x):
    return complex(x)


# ---------------------------------------------------------------------------
# parameter records


@dataclass(frozen=True)
class CheParams:
    """Confluent Heun equation with regular singularities at 0 and z0."""
    B1: complex
    B2: complex
    B3: complex
    z0: complex
    omega: complex
    eta: complex

    def __post_init__(self):
        for name in ("B1", "B2", "B3", "z0", "omega", "eta"):
            object.__setattr__(self, name, _c(getattr(self, name)))
        if self.z0 == 0:
            raise ValueError("z0 must be nonzero; use DcheParams for z0=0")

    @property
    def family(self):
        return "che"

    def ode_coeffs(self, z):
        """(p1, p0) of U'' + p1 U' + p0 U = 0 at the point z."""
        z = _c(z)
        lead = z * (z - self.z0)
        p1 = (self.B1 + self.B2 * z) / lead
        p0 = (self.B3 - 2.0 * self.eta * self.omega * (z - self.z0)
              + self.omega ** 2 * lead) / lead
        return p1, p0


@dataclass(frozen=True)
class DcheParams:
    """Double-confluent Heun equation (irregular points at 0 and infinity)."""
    B1: complex
    B2: complex
    B3: complex
    omega: complex
    eta: complex

    def __post_init__(self):
        for name in ("B1", "B2", "B3", "omega", "eta"):
            object.__setattr__(self, name, _c(getattr(self, name)))
        if self.B1 == 0:
            raise ValueError("B1 must be nonzero in the double-confluent case")
        if self.omega == 0:
            raise ValueError("omega must be nonzero; widche covers omega=0")

    @property
    def family(self):
        return "dche"

    def ode_coeffs(self, z):
        z = _c(z)
        p1 = (self.B1 + self.B2 * z) / z ** 2
        p0 = (self.B3 - 2.0 * self.eta * self.omega * z
              + self.omega ** 2 * z ** 2) / z ** 2
        return p1, p0


@dataclass(frozen=True)
class WiCheParams:
    """Whittaker-Ince limit of the CHE."""
    B1: complex
    B2: complex
    B3: complex
    z0: complex
    q: complex

    def __post_init__(self):
        for name in ("B1", "B2", "B3", "z0", "q"):
            object.__setattr__(self, name, _c(getattr(self, name)))
        if self.q == 0:
            raise ValueError("q must be nonzero in the Whittaker-Ince form")
        if self.z0 == 0:
            raise ValueError("z0 must be nonzero; use WiDcheParams for z0=0")

    @property
    def family(self):
        return "wiche"

    def ode_coeffs(self, z):
        z = _c(z)
        lead = z * (z - self.z0)
        p1 = (self.B1 + self.B2 * z) / lead
        p0 = (self.B3 + self.q * (z - self.z0)) / lead
        return p1, p0


@dataclass(frozen=True)
class WiDcheParams:
    """Whittaker-Ince limit of the DCHE."""
    B1: complex
    B2: complex
    B3: complex
    q: complex

    def __post_init__(self):
        for name in ("B1", "B2", "B3", "q"):
            object.__setattr__(self, name, _c(getattr(self, name)))
        if self.q == 0:
            raise ValueError("q must be nonzero in the Whittaker-Ince form")
        if self.B1 == 0:
            raise ValueError("B1 must be nonzero in the double-confluent case")

    @property
    def family(self):
        return "widche"

    def ode_coeffs(self, z):
        z = _c(z)
        p1 = (self.B1 + self.B2 * z) / z ** 2
        p0 = (self.B3 + self.q * z) / z ** 2
        return p1, p0


EquationParams = (CheParams, DcheParams, WiCheParams, WiDcheParams)


# ---------------------------------------------------------------------------
# prefactors and variable maps


@dataclass(frozen=True)
class Factor:
    """One multiplicative factor of a solution prefactor.

    kind is one of
      "z_pow"      z**value
      "zmz0_pow"   (z - ref)**value
      "exp_linear" exp(value * z)
      "exp_inv"    exp(value / z)
      "const"      value
    """
    kind: str
    value: complex
    ref: complex = 0j

    def __post_init__(self):
        if self.kind not in ("z_pow", "zmz0_pow", "exp_linear", "exp_inv",
                             "const"):
            raise ValueError(f"unknown factor kind {self.kind!r}")
        object.__setattr__(self, "value", _c(self.value))
        object.__setattr__(self, "ref", _c(self.ref))

    def log_at(self, z):
        z = _c(z)
        if self.kind == "z_pow":
            return self.value * cmath.log(z)
        if self.kind == "zmz0_pow":
            return self.value * cmath.log(z - self.ref)
        if self.kind == "exp_linear":
            return self.value * z
        if self.kind == "exp_inv":
            return self.value / z
        return cmath.log(self.value)

    def dlog_at(self, z):
        """d/dz of the factor's logarithm."""
        z = _c(z)
        if self.kind == "z_pow":
            return self.value / z
        if self.kind == "zmz0_pow":
            return self.value / (z - self.ref)
        if self.kind == "exp_linear":
            return self.value
        if self.kind == "exp_inv":
            return -self.value / z ** 2
        return 0j

    def d2log_at(self, z):
        """Second z-derivative of the factor's logarithm."""
        z = _c(z)
        if self.kind == "z_pow":
            return -self.value / z ** 2
        if self.kind == "zmz0_pow":
            return -self.value / (z - self.ref) ** 2
        if self.kind == "exp_inv":
            return 2.0 * self.value / z ** 3
        return 0j

    def singular_point(self):
        if self.kind in ("z_pow", "exp_inv"):
            isint = (self.value.imag == 0.0
                     and self.value.real == round(self.value.real)
                     and self.value.real >= 0.0)
            if self.kind == "exp_inv" or not isint:
                return 0j
        if self.kind == "zmz0_pow":
            isint = (self.value.imag == 0.0
                     and self.value.real == round(self.value.real)
                     and self.value.real >= 0.0)
            if not isint:
                return self.ref
        return None


@dataclass(frozen=True)
class PrefactorSpec:
    """Ordered product of closed-form factors multiplying a solution."""
    factors: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @classmethod
    def identity(cls):
        return cls(())

    def __mul__(self, other):
        return PrefactorSpec(self.factors + other.factors)

    def log_at(self, z):
        return sum((f.log_at(z) for f in self.factors), 0j)

    def at(self, z):
        return cmath.exp(self.log_at(z))

    def dlog_at(self, z):
        return sum((f.dlog_at(z) for f in self.factors), 0j)

    def d2log_at(self, z):
        return sum((f.d2log_at(z) for f in self.factors), 0j)

    def singular_points(self):
        pts = []
        for f in self.factors:
            p = f.singular_point()
            if p is not None and p not in pts:
                pts.append(p)
        return tuple(pts)


@dataclass(frozen=True)
class VariableMap:
    """Symbolic variable substitution z = z(u).

    Transformations use "identity" (z -> z), "reflect" (z -> const - z) and
    "inverse" (z -> const / z).  Reductions add the closed trigonometric,
    exponential and hyperbolic maps of the classical equations.
    """
    kind: str
    const: complex = 0j

    _FORMULAS = {
        "identity": "z = u",
        "reflect": "z = const - u",
        "inverse": "z = const / u",
        "cos2_half": "z = cos(const*u/2)**2",
        "cos2": "z = cos(const*u)**2",
        "exp_i": "z = exp(i*const*u)",
        "exp_2i": "z = exp(2i*const*u)",
        "half_shift": "z = (1 - u)/2",
        "cosh2": "z = cosh(u)**2",
    }

    def __post_init__(self):
        if self.kind not in self._FORMULAS:
            raise ValueError(f"unknown variable map {self.kind!r}")
        object.__setattr__(self, "const", _c(self.const))

    @property
    def formula(self):
        return self._FORMULAS[self.kind]

    def z_of(self, u):
        u = _c(u)
        k, c = self.kind, self.const
        if k == "identity":
            return u
        if k == "reflect":
            return c - u
        if k == "inverse":
            return c / u
        if k == "cos2_half":
            return cmath.cos(0.5 * c * u) ** 2
        if k == "cos2":
            return cmath.cos(c * u) ** 2
        if k == "exp_i":
            return cmath.exp(1j * c * u)
        if k == "exp_2i":
            return cmath.exp(2j * c * u)
        if k == "half_shift":
            return 0.5 * (1.0 - u)
        return cmath.cosh(u) ** 2

    def dz_du(self, u):
        u = _c(u)
        k, c = self.kind, self.const
        if k == "identity":
            return 1.0 + 0j
        if k == "reflect":
            return -1.0 + 0j
        if k == "inverse":
            return -c / u ** 2
        if k == "cos2_half":
            return -0.5 * c * cmath.sin(c * u)
        if k == "cos2":
            return -c * cmath.sin(2.0 * c * u)
        if k == "exp_i":
            return 1j * c * cmath.exp(1j * c * u)
        if k == "exp_2i":
            return 2j * c * cmath.exp(2j * c * u)
        if k == "half_shift":
            return -0.5 + 0j
        return cmath.sinh(2.0 * u)

    def d2z_du2(self, u):
        u = _c(u)
        k, c = self.kind, self.const
        if k in ("identity", "reflect", "half_shift"):
            return 0j
        if k == "inverse":
            return 2.0 * c / u ** 3
        if k == "cos2_half":
            return -0.5 * c ** 2 * cmath.cos(c * u)
        if k == "cos2":
            return -2.0 * c ** 2 * cmath.cos(2.0 * c * u)
        if k == "exp_i":
            return -(c ** 2) * cmath.exp(1j * c * u)
        if k == "exp_2i":
            return -4.0 * c ** 2 * cmath.exp(2j * c * u)
        return 2.0 * cmath.cosh(2.0 * u)


@dataclass(frozen=True)
class TransformSpec:
    """Record of one applied substitution: how to carry a solution across.

    If U solves the equation with the transformed parameters, then
    prefactor(y) * U(y) at y = var_map.z_of(z) solves the original
    equation in z.  The prefactor is a function of the new variable.
    """
    name: str
    var_map: VariableMap
    prefactor: PrefactorSpec
    target: object = field(default=None, repr=False)

    def carry(self, z, u_value):
        """Value at z of the original-equation solution built from the
        transformed-equation value u_value at var_map.z_of(z)."""
        return self.prefactor.at(self.var_map.z_of(z)) * u_value


# ---------------------------------------------------------------------------
# transformation groups


def transform_che(which, p):
    """Apply one of the four CHE substitutions; returns (params, spec)."""
    if not isinstance(p, CheParams):
        raise TypeError("transform_che expects CheParams")
    r = p.B1 / p.z0
    if which == "T1":
        new = CheParams(-p.B1 - 2.0 * p.z0, 2.0 + p.B2 + 2.0 * r,
                        p.B3 + (1.0 + r) * (p.B2 + r),
                        p.z0, p.omega, p.eta)
        pf = PrefactorSpec((Factor("z_pow", 1.0 + r),))
        vm = VariableMap("identity")
    elif which == "T2":
        new = CheParams(p.B1, 2.0 - p.B2 - 2.0 * r,
                        p.B3 + r * (r + p.B2 - 1.0),
                        p.z0, p.omega, p.eta)
        pf = PrefactorSpec((Factor("zmz0_pow", 1.0 - p.B2 - r, p.z0),))
        vm = VariableMap("identity")
    elif which == "T3":
        new = CheParams(p.B1, p.B2, p.B3, p.z0, -p.omega, -p.eta)
        pf = PrefactorSpec.identity()
        vm = VariableMap("identity")
    elif which == "T4":
        new = CheParams(-p.B1 - p.B2 * p.z0, p.B2,
                        p.B3 + 2.0 * p.eta * p.omega * p.z0,
                        p.z0, -p.omega, p.eta)
        pf = PrefactorSpec.identity()
        vm = VariableMap("reflect", p.z0)
    else:
        raise ValueError(f"unknown CHE transformation {which!r}")
    return new, TransformSpec(which, vm, pf, new)


_WICHE_ALIASES = {"\N{MATHEMATICAL SCRIPT CAPITAL T}1": "WT1",
                  "\N{MATHEMATICAL SCRIPT CAPITAL T}2": "WT2",
                  "\N{MATHEMATICAL SCRIPT CAPITAL T}3": "WT3"}


def transform_wiche(which, p):
    """Apply one of the three substitutions of the Whittaker-Ince CHE."""
    if not isinstance(p, WiCheParams):
        raise TypeError("transform_wiche expects WiCheParams")
    which = _WICHE_ALIASES.get(which, which)
    r = p.B1 / p.z0
    if which == "WT1":
        new = WiCheParams(-p.B1 - 2.0 * p.z0, 2.0 + p.B2 + 2.0 * r,
                          p.B3 + (1.0 + r) * (p.B2 + r), p.z0, p.q)
        pf = PrefactorSpec((Factor("z_pow", 1.0 + r),))
        vm = VariableMap("identity")
    elif which == "WT2":
        new = WiCheParams(p.B1, 2.0 - p.B2 - 2.0 * r,
                          p.B3 + r * (r + p.B2 - 1.0), p.z0, p.q)
        pf = PrefactorSpec((Factor("zmz0_pow", 1.0 - p.B2 - r, p.z0),))
        vm = VariableMap("identity")
    elif which == "WT3":
        new = WiCheParams(-p.B1 - p.B2 * p.z0, p.B2, p.B3 - p.q * p.z0,
                          p.z0, -p.q)
        pf = PrefactorSpec.identity()
        vm = VariableMap("reflect", p.z0)
    else:
        raise ValueError(f"unknown Whittaker-Ince transformation {which!r}")
    return new, TransformSpec(which, vm, pf, new)


def transform_dche(which, p):
    """Apply one of the three DCHE substitutions; t2 inverts the variable."""
    if not isinstance(p, DcheParams):
        raise TypeError("transform_dche expects DcheParams")
    if which == "t1":
        new = DcheParams(-p.B1, 4.0 - p.B2, p.B3 + 2.0 - p.B2,
                         p.omega, p.eta)
        pf = PrefactorSpec((Factor("exp_inv", p.B1),
                            Factor("z_pow", 2.0 - p.B2)))
        vm = VariableMap("identity")
    elif which == "t2":
        ieta = 1j * p.eta
        half = 0.5 * p.B2
        pexp = half + ieta
        c = 0.5j * p.B1
        new = DcheParams(p.omega * p.B1, 2.0 + 2.0 * ieta,
                         p.B3 - (half + ieta) * (half - ieta - 1.0),
                         1.0, -1j * (half - 1.0))
        # e^{i omega z + B1/(2z)} z^{-B2/2 - i eta} rewritten in y = iB1/(2z)
        pf = PrefactorSpec((Factor("const", cmath.exp(-pexp * cmath.log(c))),
                            Factor("exp_inv", -0.5 * p.omega * p.B1),
                            Factor("exp_linear", -1j),
                            Factor("z_pow", pexp)))
        vm = VariableMap("inverse", c)
    elif which == "t3":
        new = DcheParams(p.B1, p.B2, p.B3, -p.omega, -p.eta)
        pf = PrefactorSpec.identity()
        vm = VariableMap("identity")
    else:
        raise ValueError(f"unknown DCHE transformation {which!r}")
    return new, TransformSpec(which, vm, pf, new)


def transform_widche(p):
    """The single substitution of the Whittaker-Ince DCHE."""
    if not isinstance(p, WiDcheParams):
        raise TypeError("transform_widche expects WiDcheParams")
    new = WiDcheParams(-p.B1, 4.0 - p.B2, p.B3 + 2.0 - p.B2, p.q)
    pf = PrefactorSpec((Factor("exp_inv", p.B1),
                        Factor("z_pow", 2.0 - p.B2)))
    return new, TransformSpec("T", VariableMap("identity"), pf, new)


# ---------------------------------------------------------------------------
# limit maps


def whittaker_ince_limit(p, q=None):
    """CHE -> its Whittaker-Ince form (omega -> 0, eta -> inf, 2 eta omega
    fixed at -q).  With q omitted, -2*eta*omega of the record is used."""
    if not isinstance(p, CheParams):
        raise TypeError("whittaker_ince_limit expects CheParams")
    if q is None:
        q = -2.0 * p.eta * p.omega
    q = _c(q)
    if q == 0:
        raise InvalidLimit("the record has 2*eta*omega = 0, so no "
                           "Whittaker-Ince family passes through it")
    return WiCheParams(p.B1, p.B2, p.B3, p.z0, q)


def leaver_limit(p):
    """CHE -> DCHE by letting the second singular point collapse (z0 -> 0)."""
    if not isinstance(p, CheParams):
        raise TypeError("leaver_limit expects CheParams")
    if p.B1 == 0 or p.omega == 0:
        raise InvalidLimit("the z0 -> 0 limit needs B1 != 0 and omega != 0")
    return DcheParams(p.B1, p.B2, p.B3, p.omega, p.eta)


def wi_of_dche(p, q=None):
    """DCHE -> its Whittaker-Ince form; q defaults to -2*eta*omega.

    Records with B2 = 2 + 2i*eta (eta != 0) are rejected: there B2 is the
    image of eta under the inverse-variable substitution (the
    Whittaker-Hill reduction produces exactly these), so it would diverge
    together with eta in the limit.
    """
    if not isinstance(p, DcheParams):
        raise TypeError("wi_of_dche expects DcheParams")
    if q is None:
        q = -2.0 * p.eta * p.omega
    q = _c(q)
    if q == 0:
        raise InvalidLimit("the record has 2*eta*omega = 0, so no "
                           "Whittaker-Ince family passes through it")
    if p.eta != 0 and abs(p.B2 - (2.0 + 2j * p.eta)) < 1e-12:
        raise InvalidLimit("B2 = 2 + 2i*eta is tied to eta and would "
                           "diverge in the Whittaker-Ince limit")
    return WiDcheParams(p.B1, p.B2, p.B3, q)


# ---------------------------------------------------------------------------
# reductions of the classical equations


@dataclass(frozen=True)
class Mathieu:
    """w'' + sigma^2 [a - 2 k^2 cos(2 sigma u)] w = 0.

    sigma = 1 is the Mathieu equation proper, sigma = i (with real u) the
    modified one; any complex sigma is accepted and recorded.
    """
    a: complex
    k: complex
    sigma: complex = 1.0

    def __post_init__(self):
        for name in ("a", "k", "sigma"):
            object.__setattr__(self, name, _c(getattr(self, name)))

    def ode_coeffs(self, u):
        u = _c(u)
        s0 = self.sigma ** 2 * (self.a
                                - 2.0 * self.k ** 2
                                * cmath.cos(2.0 * self.sigma * u))
        return 0j, s0


@dataclass(frozen=True)
class Whe:
    """Whittaker-Hill equation
    W'' + varsigma^2 [theta - xi^2/8 - (p+1) xi cos(2 varsigma u)
                      + (xi^2/8) cos(4 varsigma u)] W = 0."""
    theta: complex
    xi: complex
    p: complex
    varsigma: complex = 1.0

    def __post_init__(self):
        for name in ("theta", "xi", "p", "varsigma"):
            object.__setattr__(self, name, _c(getattr(self, name)))

    def ode_coeffs(self, u):
        u = _c(u)
        vs = self.varsigma
        s0 = vs ** 2 * (self.theta - self.xi ** 2 / 8.0
                        - (self.p + 1.0) * self.xi * cmath.cos(2.0 * vs * u)
                        + self.xi ** 2 / 8.0 * cmath.cos(4.0 * vs * u))
        return 0j, s0


@dataclass(frozen=True)
class Spheroidal:
    """[(1-y^2) S']' + [lam + gamma^2 (1-y^2) - mu^2/(1-y^2)] S = 0.

    sign selects omega = sign * 2 * gamma in the reduced equation; the
    worked convention is sign = -1.
    """
    gamma: complex
    lam: complex
    mu: complex
    sign: int = -1

    def __post_init__(self):
        for name in ("gamma", "lam", "mu"):
            object.__setattr__(self, name, _c(getattr(self, name)))
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def ode_coeffs(self, y):
        y = _c(y)
        lead = 1.0 - y ** 2
        s1 = -2.0 * y / lead
        s0 = (self.lam + self.gamma ** 2 * lead - self.mu ** 2 / lead) / lead
        return s1, s0


def _qes_potential(beta, gamma, delta, ell, u):
    sh2 = cmath.sinh(u) ** 2
    ch2 = cmath.cosh(u) ** 2
    return (4.0 * beta ** 2 * sh2 ** 2
            + 4.0 * beta * (beta - 2.0 * (gamma + delta) - 2.0 * ell) * sh2
            + 4.0 * (delta - 0.25) * (delta - 0.75) / sh2
            - 4.0 * (gamma - 0.25) * (gamma - 0.75) / ch2)


@dataclass(frozen=True)
class Ushveridze:
    """Quasi-exactly-solvable hyperbolic Schrodinger problem
    psi'' + [E - V(u)] psi = 0 with
    V = 4 b^2 sinh^4 u + 4 b [b - 2(g+d) - 2 l] sinh^2 u
        + 4 (d-1/4)(d-3/4)/sinh^2 u - 4 (g-1/4)(g-3/4)/cosh^2 u.

    energy is the reduced E entering the parameter record; sign selects
    i*omega = sign * beta (worked convention sign = -1).
    """
    beta: complex
    gamma: complex
    delta: complex
    ell: complex
    energy: complex = 0.0
    sign: int = -1

    def __post_init__(self):
        for name in ("beta", "gamma", "delta", "ell", "energy"):
            object.__setattr__(self, name, _c(getattr(self, name)))
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.beta.imag == 0.0 and self.beta.real <= 0.0:
            warnings.warn("the bound-state analysis assumes beta > 0",
                          stacklevel=2)
        if self.delta.imag == 0.0 and self.delta.real < 0.25:
            warnings.warn("the bound-state analysis assumes delta >= 1/4",
                          stacklevel=2)

    def ode_coeffs(self, u):
        u = _c(u)
        v = _qes_potential(self.beta, self.gamma, self.delta, self.ell, u)
        return 0j, self.energy - v


@dataclass(frozen=True)
class UshveridzeWheCase:
    """The four (gamma, delta) pairs in {1/4, 3/4}^2, where the singular
    potential terms vanish and the problem reduces without a prefactor."""
    beta: complex
    gamma: complex
    delta: complex
    ell: complex
    energy: complex = 0.0
    sign: int = -1

    def __post_init__(self):
        for name in ("beta", "gamma", "delta", "ell", "energy"):
            object.__setattr__(self, name, _c(getattr(self, name)))
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        ok = {0.25, 0.75}
        if (self.gamma.imag != 0.0 or self.delta.imag != 0.0
                or self.gamma.real not in ok or self.delta.real not in ok):
            raise ValueError("gamma and delta must each be 1/4 or 3/4 here")

    def ode_coeffs(self, u):
        u = _c(u)
        v = _qes_potential(self.beta, self.gamma, self.delta, self.ell, u)
        return 0j, self.energy - v


def reduce(source, target):
    """Reduce a classical problem to (params, variable map, prefactor).

    The returned triple means: if U(z) solves the target equation with the
    returned parameters, then prefactor(z(u)) * U(z(u)) solves the source
    equation in its own variable u.
    """
    one = PrefactorSpec.identity()
    if isinstance(source, Mathieu):
        if target == "che":
            return (CheParams(-0.5, 1.0, 2.0 * source.k ** 2 - source.a,
                              1.0, 4.0 * source.k, 0.0),
                    VariableMap("cos2_half", source.sigma), one)
        if target == "wiche":
            return (WiCheParams(-0.5, 1.0,
                                0.5 * source.k ** 2 - 0.25 * source.a,
                                1.0, source.k ** 2),
                    VariableMap("cos2", source.sigma), one)
        if target == "dche":
            return (DcheParams(-2j * source.k, 2.0, 0.25 - source.a,
                               source.k, 0.0),
                    VariableMap("exp_i", source.sigma),
                    PrefactorSpec((Factor("z_pow", 0.5),
                                   Factor("exp_inv", 1j * source.k))))
        raise UnsupportedReduction(f"Mathieu does not reduce to {target!r}")
    if isinstance(source, Whe):
        if target == "che":
            return (CheParams(-0.5, 1.0,
                              0.25 * ((source.p + 1.0) * source.xi
                                      - source.theta),
                              1.0, -0.5j * source.xi,
                              -0.5j * (source.p + 1.0)),
                    VariableMap("cos2", source.varsigma), one)
        if target == "dche":
            return (DcheParams(-0.25 * source.xi, source.p + 3.0,
                               (0.5 * source.p + 1.0) ** 2
                               + source.xi ** 2 / 32.0 - 0.25 * source.theta,
                               -0.125j * source.xi,
                               -0.5j * (source.p + 1.0)),
                    VariableMap("exp_2i", source.varsigma),
                    PrefactorSpec((Factor("z_pow", 1.0 + 0.5 * source.p),
                                   Factor("exp_inv", source.xi / 8.0))))
        raise UnsupportedReduction(f"Whittaker-Hill does not reduce "
                                   f"to {target!r}")
    if isinstance(source, Spheroidal):
        if target == "che":
            mu = source.mu
            return (CheParams(-mu - 1.0, 2.0 * mu + 2.0,
                              mu * (mu + 1.0) - source.lam,
                              1.0, source.sign * 2.0 * source.gamma, 0.0),
                    VariableMap("half_shift"),
                    PrefactorSpec((Factor("z_pow", 0.5 * mu),
                                   Factor("zmz0_pow", 0.5 * mu, 1.0))))
        raise UnsupportedReduction(f"spheroidal does not reduce to {target!r}")
    if isinstance(source, UshveridzeWheCase):
        if target == "che":
            s = source.sign
            return (CheParams(-0.5, 1.0, 0.25 * source.energy, 1.0,
                              -1j * s * source.beta,
                              -1j * s * (source.ell + source.gamma
                                         + source.delta)),
                    VariableMap("cosh2"), one)
        raise UnsupportedReduction(f"the special-pair problem only reduces "
                                   f"to a CHE, not {target!r}")
    if isinstance(source, Ushveridze):
        if target == "che":
            s = source.sign
            g, d = source.gamma, source.delta
            return (CheParams(-2.0 * g, 2.0 * (g + d),
                              0.25 * source.energy + (g + d - 0.5) ** 2,
                              1.0, -1j * s * source.beta,
                              -1j * s * (source.ell + g + d)),
                    VariableMap("cosh2"),
                    PrefactorSpec((Factor("z_pow", g - 0.25),
                                   Factor("zmz0_pow", d - 0.25, 1.0))))
        raise UnsupportedReduction(f"the quasi-exactly-solvable problem "
                                   f"only reduces to a CHE, not {target!r}")
    raise UnsupportedReduction(f"unknown source problem {type(source).__name__}")


# ---------------------------------------------------------------------------
# JSON-friendly round trip


def _c_to_json(z):
    return {"re": z.real, "im": z.imag}


def _c_from_json(d):
    if isinstance(d, dict):
        return complex(d.get("re", 0.0), d.get("im", 0.0))
    return complex(d)


_FIELDS = {
    "che": ("B1", "B2", "B3", "z0", "omega", "eta"),
    "dche": ("B1", "B2", "B3", "omega", "eta"),
    "wiche": ("B1", "B2", "B3", "z0", "q"),
    "widche": ("B1", "B2", "B3", "q"),
}

_CTORS = {"che": CheParams, "dche": DcheParams,
          "wiche": WiCheParams, "widche": WiDcheParams}


def params_to_dict(p):
    out = {"family": p.family}
    for name in _FIELDS[p.family]:
        out[name] = _c_to_json(getattr(p, name))
    return out


def params_from_dict(d):
    fam = d.get("family")
    if fam not in _CTORS:
        raise ValueError(f"unknown equation family {fam!r}")
    kwargs = {name: _c_from_json(d[name]) for name in _FIELDS[fam]}
    return _CTORS[fam](**kwargs)

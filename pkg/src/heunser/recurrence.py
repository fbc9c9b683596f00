"""Three-term recurrence systems for series solutions in Coulomb-type bases.

Each solution family of the four equations handled by this package (CHE,
DCHE, WI-CHE, WI-DCHE) carries a tridiagonal recurrence

    alpha_n b_{n+1} + beta_n b_n + gamma_n b_{n-1} = 0

for the expansion coefficients.  Two-sided families run over all integers n
and contain a free parameter nu fixed by a characteristic equation.
One-sided families run over n >= 0; their rows are the two-sided rows of a
source set evaluated at a pinned value of nu, and the value of 2*nu + 2
decides whether the first rows of the system are modified by an extra
payload term (RelationVariant).

The module provides

  * exact rational row evaluation with limit semantics: a numerator zero
    cancels against a denominator zero through the factor slopes, an
    uncancelled denominator zero raises DenominatorZero naming the factor;
  * minimal-solution ratios b_{n+1}/b_n and b_{n-1}/b_n by adaptive
    modified-Lentz continued fractions;
  * coefficient-table construction for two-sided and one-sided systems,
    including detection of finite series (gamma row vanishing at an integer)
    and of series that begin above n=0 (alpha row vanishing);
  * admissibility reports for the non-integrality conditions attached to
    each family.

Tables store log-magnitude and phase so that cross-set coefficient relations
involving Gamma-function ratios can be checked without overflow.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

from .params import CheParams, DcheParams, WiCheParams, WiDcheParams

__all__ = [
    "FamilyId",
    "RecurrenceCoeffs",
    "CoefficientTable",
    "RelationVariant",
    "ConditionCheck",
    "AdmissibilityReport",
    "RecurrenceError",
    "DenominatorZero",
    "NoConvergence",
    "NotAtRoot",
    "InconsistentTruncation",
    "pinned_nu",
    "coeffs_at",
    "relation_variant",
    "admissibility",
    "minimal_ratio_forward",
    "minimal_ratio_backward",
    "build_two_sided",
    "build_one_sided",
    "two_sided_residual",
    "one_sided_residual",
    "table_residuals",
    "max_row_residual",
    "heine_coeffs",
]

_TAU = 2.0 * math.pi
_TINY = 1e-300
_LENTZ_TINY = 1e-30
_FACTOR_ZERO_RTOL = 1e-13
_INT_TOL = 1e-9
_CF_START_DEPTH = 64
_CF_MAX_DEPTH = 16384

_EQUATIONS = ("CHE", "DCHE", "WI-CHE", "WI-DCHE")

_PARAM_TYPES = {
    "CHE": CheParams,
    "DCHE": DcheParams,
    "WI-CHE": WiCheParams,
    "WI-DCHE": WiDcheParams,
}

_SET_COUNTS = {
    ("CHE", "two"): 4,
    ("CHE", "one"): 8,
    ("DCHE", "two"): 4,
    ("DCHE", "one"): 4,
    ("WI-CHE", "two"): 4,
    ("WI-CHE", "one"): 8,
    ("WI-DCHE", "two"): 3,
    ("WI-DCHE", "one"): 2,
}

# two-sided set whose rows generate one-sided set i, by equation
_ONE_SIDED_SOURCE = {
    "CHE": (1, 1, 2, 2, 3, 4, 4, 3),
    "WI-CHE": (1, 1, 2, 2, 3, 4, 4, 3),
    "DCHE": (1, 2, 3, 4),
    "WI-DCHE": (1, 2),
}


class RecurrenceError(ValueError):
    """Raised when a recurrence computation cannot proceed."""


class DenominatorZero(RecurrenceError):
    """A row denominator factor vanishes with no cancelling numerator zero."""

    def __init__(self, n, factor):
        self.n = n
        self.factor = factor
        super().__init__(
            f"denominator factor ({factor}) vanishes at n={n} "
            "without a cancelling numerator zero"
        )


class NoConvergence(RecurrenceError):
    """A continued fraction hit the depth cap without settling."""

    def __init__(self, message, last, previous):
        self.last = last
        self.previous = previous
        super().__init__(f"{message}; last two iterates {previous!r} -> {last!r}")


class NotAtRoot(RecurrenceError):
    """Coefficient-table build attempted away from a characteristic root."""

    def __init__(self, residual):
        self.residual = residual
        super().__init__(
            f"characteristic residual {abs(residual):.3e} exceeds tolerance; "
            "solve the characteristic equation first"
        )


class InconsistentTruncation(RecurrenceError):
    """A gamma-row zero demands a finite series the closure row rejects."""

    def __init__(self, residual, index):
        self.residual = residual
        self.index = index
        super().__init__(
            f"finite series forced by gamma zero at n={index} but closure "
            f"residual is {abs(residual):.3e}; parameters are not at an "
            "eigenvalue of the truncated system"
        )


@dataclass(frozen=True)
class FamilyId:
    """Identifies one recurrence family: equation, sidedness, set, basis."""

    equation: str
    sided: str
    set_index: int
    eta_zero_bessel: bool = False

    def __post_init__(self):
        if self.equation not in _EQUATIONS:
            raise ValueError(f"unknown equation {self.equation!r}")
        if self.sided not in ("two", "one"):
            raise ValueError(f"sided must be 'two' or 'one', got {self.sided!r}")
        count = _SET_COUNTS[(self.equation, self.sided)]
        if not 1 <= int(self.set_index) <= count:
            raise ValueError(
                f"{self.equation} {self.sided}-sided set_index must be in "
                f"1..{count}, got {self.set_index}"
            )
        if self.eta_zero_bessel and self.equation != "CHE":
            raise ValueError("Bessel-basis rows exist only for the CHE")


def pinned_nu(family, params):
    """Value of nu at which one-sided rows equal two-sided source rows."""
    if family.sided != "one":
        raise ValueError("pinned nu exists only for one-sided families")
    h = params.B2 / 2
    i = family.set_index
    if family.equation in ("CHE", "WI-CHE"):
        r = params.B1 / params.z0
        return (complex(h - 1), complex(r + h), complex(1 - h), complex(-r - h))[
            (i - 1) % 4
        ]
    if family.equation == "DCHE":
        return (
            complex(h - 1),
            complex(1 - h),
            1j * complex(params.eta),
            -1j * complex(params.eta),
        )[i - 1]
    return (complex(h - 1), complex(1 - h))[i - 1]


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """A recurrence family bound to equation parameters and a nu value.

    Two-sided systems need an explicit nu.  One-sided systems pin nu from
    the parameters; a supplied value must match the pinned one.
    """

    family: FamilyId
    params: object
    nu: complex | None = None

    def __post_init__(self):
        expected = _PARAM_TYPES[self.family.equation]
        if not isinstance(self.params, expected):
            raise ValueError(
                f"{self.family.equation} rows need {expected.__name__}, "
                f"got {type(self.params).__name__}"
            )
        if self.family.eta_zero_bessel and self.params.eta != 0:
            raise ValueError("Bessel-basis rows require eta = 0")
        if self.family.sided == "one":
            pin = pinned_nu(self.family, self.params)
            if self.nu is not None and abs(complex(self.nu) - pin) > 1e-12 * max(
                1.0, abs(pin)
            ):
                raise ValueError(
                    f"one-sided set {self.family.set_index} has nu pinned to "
                    f"{pin}, got {self.nu}"
                )
            object.__setattr__(self, "nu", pin)
        else:
            if self.nu is None:
                raise ValueError("two-sided rows need an explicit nu")
            object.__setattr__(self, "nu", complex(self.nu))


@dataclass(frozen=True)
class RelationVariant:
    """First-row modification of a one-sided system.

    payload is the extra term entering the row named by target:
    'gamma1' adds it to the gamma row at n=1, 'beta0' to the beta row at
    n=0, None leaves the rows plain.  alpha_minus1 is the cancellation
    limit of the set's alpha row at n=-1 from which the payload is built.
    """

    tag: str
    payload: complex
    target: str | None
    alpha_minus1: complex


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    value: complex
    distance: float
    violated: bool


@dataclass(frozen=True)
class AdmissibilityReport:
    """Non-integrality conditions for a family, with distance to violation."""

    checks: tuple

    @property
    def ok(self):
        return not any(c.violated for c in self.checks)

    @property
    def violations(self):
        return tuple(c for c in self.checks if c.violated)


@dataclass(frozen=True, eq=False)
class CoefficientTable:
    """Series coefficients stored as log-magnitude and phase.

    entry(n) returns the complex coefficient (0 outside the stored range
    when that side terminates exactly).  The normalization is b_start = 1.
    """

    nu: complex
    n_min: int
    n_max: int
    start_index: int = 0
    finite_flag: bool = False
    termination_index: int | None = None
    begin_index: int | None = None
    _logmag: dict = field(default_factory=dict, repr=False)
    _phase: dict = field(default_factory=dict, repr=False)

    def log_entry(self, n):
        """(log magnitude, phase) of b_n; (-inf, 0.0) for an absent entry."""
        if n in self._logmag:
            return self._logmag[n], self._phase[n]
        return -math.inf, 0.0

    def entry(self, n):
        lm, ph = self.log_entry(n)
        if lm == -math.inf:
            return 0j
        try:
            mag = math.exp(lm)
        except OverflowError:
            mag = math.inf
        return cmath.rect(mag, ph)

    @property
    def entries(self):
        return {n: self.entry(n) for n in sorted(self._logmag)}


# ---------------------------------------------------------------------------
# row database


@dataclass(frozen=True)
class _Lin:
    """Linear factor a*n + b; the offset b absorbs nu and the parameters."""

    a: float
    b: complex
    label: str

    def at(self, n):
        return self.a * n + self.b


@dataclass(frozen=True)
class _Prod:
    c: complex
    num: tuple
    den: tuple


def _wf(nu, c, label):
    return _Lin(1.0, nu + c, label)


def _w2f(nu, c, label):
    return _Lin(2.0, 2 * nu + c, label)


def _che_factors(p, nu):
    h = p.B2 / 2
    r = p.B1 / p.z0
    return {
        "p2mh": _wf(nu, 2 - h, "n+nu+2-B2/2"),
        "ph": _wf(nu, h, "n+nu+B2/2"),
        "p1mh": _wf(nu, 1 - h, "n+nu+1-B2/2"),
        "phm1": _wf(nu, h - 1, "n+nu+B2/2-1"),
        "p1mhr": _wf(nu, 1 - h - r, "n+nu+1-B2/2-B1/z0"),
        "p1phr": _wf(nu, 1 + h + r, "n+nu+1+B2/2+B1/z0"),
        "phr": _wf(nu, h + r, "n+nu+B2/2+B1/z0"),
        "pmhr": _wf(nu, -h - r, "n+nu-B2/2-B1/z0"),
        "pie": _wf(nu, 1j * complex(p.eta), "n+nu+i*eta") if hasattr(p, "eta") else None,
        "pmie": _wf(nu, -1j * complex(p.eta), "n+nu-i*eta") if hasattr(p, "eta") else None,
    }


def _dens(nu):
    da = (_w2f(nu, 2, "2n+2nu+2"), _w2f(nu, 3, "2n+2nu+3"))
    dg = (_w2f(nu, -1, "2n+2nu-1"), _w2f(nu, 0, "2n+2nu"))
    db = (_w2f(nu, 0, "2n+2nu"), _w2f(nu, 2, "2n+2nu+2"))
    return da, dg, db


def _che_rows(p, nu, s, bessel):
    f = _che_factors(p, nu)
    da, dg, db = _dens(nu)
    if bessel:
        # rescaled coefficients a_n = i^n b_n / Gamma(n+nu+1)
        c0 = p.omega * p.z0
        da1 = (da[1],)
        dg1 = (dg[0],)
        beta = (
            _Prod(complex(-1), (f["p1mh"], f["ph"]), ()),
            _Prod(complex(-p.B3), (), ()),
        )
        table = {
            1: (c0, ("p2mh", "p1mhr"), c0, ("phm1", "phr")),
            2: (c0, ("ph", "p1phr"), c0, ("p1mh", "pmhr")),
            3: (-c0, ("p2mh", "p1phr"), -c0, ("phm1", "pmhr")),
            4: (-c0, ("ph", "p1mhr"), -c0, ("p1mh", "phr")),
        }
        ca, na, cg, ng = table[s]
        alpha = (_Prod(complex(ca), tuple(f[k] for k in na), da1),)
        gamma = (_Prod(complex(cg), tuple(f[k] for k in ng), dg1),)
        return alpha, beta, gamma
    c0 = 2j * p.omega * p.z0
    ewz = p.eta * p.omega * p.z0
    r = p.B1 / p.z0
    beta = (
        _Prod(complex(-1), (f["p1mh"], f["ph"]), ()),
        _Prod(complex(-p.B3 - ewz), (), ()),
        _Prod(complex(-ewz * (p.B2 - 2) * (p.B2 + 2 * r)), (), db),
    )
    table = {
        1: (c0, ("p2mh", "p1mhr"), -c0, ("phm1", "phr", "pie", "pmie")),
        2: (c0, ("ph", "p1phr"), -c0, ("p1mh", "pmhr", "pie", "pmie")),
        3: (-c0, ("p2mh", "p1phr"), c0, ("phm1", "pmhr", "pie", "pmie")),
        4: (-c0, ("ph", "p1mhr"), c0, ("p1mh", "phr", "pie", "pmie")),
    }
    ca, na, cg, ng = table[s]
    alpha = (_Prod(complex(ca), tuple(f[k] for k in na), da),)
    gamma = (_Prod(complex(cg), tuple(f[k] for k in ng), dg),)
    return alpha, beta, gamma


def _wiche_rows(p, nu, s):
    f = _che_factors(p, nu)
    da, dg, db = _dens(nu)
    c0 = p.q * p.z0
    r = p.B1 / p.z0
    beta = (
        _Prod(complex(1), (f["p1mh"], f["ph"]), ()),
        _Prod(complex(p.B3 - p.q * p.z0 / 2), (), ()),
        _Prod(complex(-p.q * p.z0 * (p.B2 - 2) * (p.B2 + 2 * r) / 2), (), db),
    )
    table = {
        1: (c0, ("p2mh", "p1mhr"), c0, ("phm1", "phr")),
        2: (c0, ("ph", "p1phr"), c0, ("p1mh", "pmhr")),
        3: (-c0, ("p2mh", "p1phr"), -c0, ("phm1", "pmhr")),
        4: (-c0, ("ph", "p1mhr"), -c0, ("p1mh", "phr")),
    }
    ca, na, cg, ng = table[s]
    alpha = (_Prod(complex(ca), tuple(f[k] for k in na), da),)
    gamma = (_Prod(complex(cg), tuple(f[k] for k in ng), dg),)
    return alpha, beta, gamma


def _dche_rows(p, nu, s):
    h = p.B2 / 2
    f = {
        "p2mh": _wf(nu, 2 - h, "n+nu+2-B2/2"),
        "ph": _wf(nu, h, "n+nu+B2/2"),
        "p1mh": _wf(nu, 1 - h, "n+nu+1-B2/2"),
        "phm1": _wf(nu, h - 1, "n+nu+B2/2-1"),
        "pie": _wf(nu, 1j * complex(p.eta), "n+nu+i*eta"),
        "pmie": _wf(nu, -1j * complex(p.eta), "n+nu-i*eta"),
        "p1mie": _wf(nu, 1 - 1j * complex(p.eta), "n+nu+1-i*eta"),
        "p1pie": _wf(nu, 1 + 1j * complex(p.eta), "n+nu+1+i*eta"),
    }
    da, dg, db = _dens(nu)
    c0 = 2j * p.omega * p.B1
    beta = (
        _Prod(complex(1), (f["p1mh"], f["ph"]), ()),
        _Prod(complex(p.B3), (), ()),
        _Prod(complex(2 * p.eta * p.omega * p.B1 * (p.B2 - 2)), (), db),
    )
    table = {
        1: (c0, ("p2mh",), c0, ("phm1", "pie", "pmie")),
        2: (-c0, ("ph",), -c0, ("p1mh", "pie", "pmie")),
        3: (c0, ("p1mie",), c0, ("phm1", "p1mh", "pie")),
        4: (-c0, ("p1pie",), -c0, ("phm1", "p1mh", "pmie")),
    }
    ca, na, cg, ng = table[s]
    alpha = (_Prod(complex(ca), tuple(f[k] for k in na), da),)
    gamma = (_Prod(complex(cg), tuple(f[k] for k in ng), dg),)
    return alpha, beta, gamma


def _widche_rows(p, nu, s):
    h = p.B2 / 2
    f = {
        "p2mh": _wf(nu, 2 - h, "n+nu+2-B2/2"),
        "ph": _wf(nu, h, "n+nu+B2/2"),
        "p1mh": _wf(nu, 1 - h, "n+nu+1-B2/2"),
        "phm1": _wf(nu, h - 1, "n+nu+B2/2-1"),
    }
    da, dg, db = _dens(nu)
    qb = p.q * p.B1
    beta = (
        _Prod(complex(1), (f["p1mh"], f["ph"]), ()),
        _Prod(complex(p.B3), (), ()),
        _Prod(complex(-qb * (p.B2 - 2)), (), db),
    )
    table = {
        1: (-qb, ("p2mh",), qb, ("phm1",)),
        2: (qb, ("ph",), -qb, ("p1mh",)),
        3: (-qb, (), qb, ("phm1", "p1mh")),
    }
    ca, na, cg, ng = table[s]
    alpha = (_Prod(complex(ca), tuple(f[k] for k in na), da),)
    gamma = (_Prod(complex(cg), tuple(f[k] for k in ng), dg),)
    return alpha, beta, gamma


@lru_cache(maxsize=512)
def _rows_cached(equation, bessel, set_idx, params, nu):
    if equation == "CHE":
        return _che_rows(params, nu, set_idx, bessel)
    if equation == "WI-CHE":
        return _wiche_rows(params, nu, set_idx)
    if equation == "DCHE":
        return _dche_rows(params, nu, set_idx)
    return _widche_rows(params, nu, set_idx)


def _rows(rc):
    fam = rc.family
    if fam.sided == "two":
        set_idx = fam.set_index
    else:
        set_idx = _ONE_SIDED_SOURCE[fam.equation][fam.set_index - 1]
    return _rows_cached(fam.equation, fam.eta_zero_bessel, set_idx, rc.params, rc.nu)


# ---------------------------------------------------------------------------
# limit-semantics evaluation


def _is_factor_zero(v, lin, n):
    return abs(v) <= _FACTOR_ZERO_RTOL * max(abs(lin.a) * abs(n), abs(lin.b), 1.0)


def _eval_prod(prod, n):
    if prod.c == 0:
        return 0j
    val = complex(prod.c)
    num_zero_slopes = []
    for lin in prod.num:
        v = lin.at(n)
        if _is_factor_zero(v, lin, n):
            num_zero_slopes.append(lin.a)
        else:
            val *= v
    den_zeros = []
    for lin in prod.den:
        v = lin.at(n)
        if _is_factor_zero(v, lin, n):
            den_zeros.append(lin)
        else:
            val /= v
    if len(num_zero_slopes) > len(den_zeros):
        return 0j
    if len(num_zero_slopes) < len(den_zeros):
        unmatched = den_zeros[len(num_zero_slopes)]
        raise DenominatorZero(n, unmatched.label)
    # matched zeros cancel through the slopes; every factor is linear in
    # w = n + nu so the slope ratio is the exact limit
    for a_num, lin_d in zip(num_zero_slopes, den_zeros):
        val *= a_num / lin_d.a
    return val


def _eval_row(prods, n):
    """Row value with limit semantics, plus the scale max|term|."""
    total = 0j
    scale = 0.0
    for prod in prods:
        v = _eval_prod(prod, n)
        total += v
        scale = max(scale, abs(v))
    return total, scale


def coeffs_at(rc, n):
    """Exact (alpha_n, beta_n, gamma_n) for the family bound in rc.

    One-sided families evaluate their source two-sided rows at the pinned
    nu, with removable zero factors cancelled through their slopes.
    """
    alpha_row, beta_row, gamma_row = _rows(rc)
    return (
        _eval_row(alpha_row, n)[0],
        _eval_row(beta_row, n)[0],
        _eval_row(gamma_row, n)[0],
    )


def _row_fns(rc):
    alpha_row, beta_row, gamma_row = _rows(rc)

    def alpha(n):
        return _eval_row(alpha_row, n)[0]

    def beta(n):
        return _eval_row(beta_row, n)[0]

    def gamma(n):
        return _eval_row(gamma_row, n)[0]

    return alpha, beta, gamma


def heine_coeffs(a, k, nu, n):
    """Heine-family triple (k^2, (2n+2nu+1)^2 - a, k^2).

    Equal to 4x the WI-CHE set-1 rows at the Mathieu reduction; the common
    row rescaling leaves ratios, roots and tables unchanged.
    """
    mid = (2 * n + 2 * nu + 1) ** 2 - a
    return complex(k) ** 2, complex(mid), complex(k) ** 2


# ---------------------------------------------------------------------------
# relation variants and admissibility


def relation_variant(family, params):
    """Select the one-sided first-row form from the family and parameters.

    The value of 2*nu + 2 at the pinned nu decides the form: 1 gives the
    second form (payload added to the gamma row at n=1), 2 gives the third
    form (payload added to the beta row at n=0), anything else the plain
    form.  A third form whose payload vanishes identically degrades to the
    plain tag; second forms keep their tag even with zero payload because
    the finite-series criterion still reads the modified row.
    """
    if family.sided != "one":
        raise ValueError("relation variants exist only for one-sided families")
    rc = RecurrenceCoeffs(family, params)
    alpha_row, _, _ = _rows(rc)
    a_m1 = _eval_row(alpha_row, -1)[0]
    x = 2 * rc.nu + 2
    if family.equation in ("WI-CHE", "WI-DCHE"):
        tags = ("rI", "rII", "rIII")
        m2 = complex(1)
        m3 = complex(1)
    elif family.eta_zero_bessel:
        # the Bessel-basis system has no third form: its would-be payload
        # carries a factor eta = 0
        tags = ("R1", "R2", "R3")
        m2 = complex(-1)
        m3 = complex(0)
    elif family.equation == "DCHE" and family.set_index in (3, 4):
        h = params.B2 / 2
        tags = ("r1A", "r2A", "r3A")
        m2 = complex((h - 1) ** 2 - 0.25)
        m3 = complex(-(h - 1))
    else:
        tags = ("r1", "r2", "r3")
        m2 = complex(-(params.eta**2 + 0.25))
        m3 = -1j * complex(params.eta)
    if abs(x - 1) < 1e-12:
        return RelationVariant(tags[1], m2 * a_m1, "gamma1", a_m1)
    if abs(x - 2) < 1e-12:
        payload = m3 * a_m1
        if payload == 0:
            return RelationVariant(tags[0], 0j, None, a_m1)
        return RelationVariant(tags[2], payload, "beta0", a_m1)
    return RelationVariant(tags[0], 0j, None, a_m1)


def _check_not_integer(name, value):
    value = complex(value)
    k = round(value.real)
    d = abs(value - k)
    return ConditionCheck(name, value, d, d < _INT_TOL * max(1.0, abs(value)))


def _check_not_nonpositive_integer(name, value):
    value = complex(value)
    k = min(0, round(value.real))
    d = abs(value - k)
    return ConditionCheck(name, value, d, d < _INT_TOL * max(1.0, abs(value)))


def admissibility(family, params, nu=None):
    """Report the family's non-integrality conditions; never raises.

    Two-sided families need nu.  One-sided families check only linear
    independence of the basis pair, 2*nu + 2 not a nonpositive integer,
    at the pinned nu.
    """
    if family.sided == "one":
        x = 2 * pinned_nu(family, params) + 2
        return AdmissibilityReport(
            (_check_not_nonpositive_integer("2nu+2", x),)
        )
    if nu is None:
        raise ValueError("two-sided admissibility needs a nu value")
    nu = complex(nu)
    h = params.B2 / 2
    checks = [_check_not_integer("2nu", 2 * nu)]
    if family.equation in ("CHE", "DCHE") and not family.eta_zero_bessel:
        checks.append(_check_not_integer("nu+i*eta", nu + 1j * complex(params.eta)))
        checks.append(_check_not_integer("nu-i*eta", nu - 1j * complex(params.eta)))
    checks.append(_check_not_integer("nu+B2/2", nu + h))
    checks.append(_check_not_integer("nu-B2/2", nu - h))
    if family.equation in ("CHE", "WI-CHE"):
        r = params.B1 / params.z0
        checks.append(_check_not_integer("nu+B1/z0+B2/2", nu + r + h))
        checks.append(_check_not_integer("nu-B1/z0-B2/2", nu - r - h))
    return AdmissibilityReport(tuple(checks))


# ---------------------------------------------------------------------------
# continued fractions


def _lentz(a_fn, b_fn, depth_tol, max_depth=_CF_MAX_DEPTH):
    """Modified Lentz for a1/(b1 + a2/(b2 + ...)).

    Convergence is judged at doubling checkpoints 64, 128, ...: two
    successive checkpoints must agree to depth_tol relative.  An exactly
    zero partial numerator truncates the fraction and returns the current
    convergent.
    """
    f = complex(_LENTZ_TINY)
    c = f
    d = 0j
    prev_cp = None
    k = 0
    next_cp = _CF_START_DEPTH
    while k < max_depth:
        k += 1
        a = a_fn(k)
        if a == 0:
            return 0j if k == 1 else f
        b = b_fn(k)
        d = b + a * d
        if d == 0:
            d = complex(_LENTZ_TINY)
        c = b + a / c
        if c == 0:
            c = complex(_LENTZ_TINY)
        d = 1 / d
        f = f * (c * d)
        if k == next_cp:
            if prev_cp is not None and abs(f - prev_cp) <= depth_tol * max(
                1.0, abs(f)
            ):
                return f
            prev_cp = f
            next_cp *= 2
    raise NoConvergence(
        f"continued fraction did not settle within depth {max_depth}", f, prev_cp
    )


def _cf_fixed_depth(a_fn, b_fn, depth):
    """Backward fold of the truncated fraction at an exact depth."""
    f = 0j
    for k in range(depth, 0, -1):
        den = b_fn(k) + f
        if den == 0:
            den = complex(_LENTZ_TINY)
        a = a_fn(k)
        f = a / den
    return f


def _forward_cf_terms(alpha, beta, gamma, n):
    def a_fn(k):
        if k == 1:
            return -gamma(n + 1)
        return -alpha(n + k - 1) * gamma(n + k)

    def b_fn(k):
        return beta(n + k)

    return a_fn, b_fn


def _backward_cf_terms(alpha, beta, gamma, n):
    def a_fn(k):
        if k == 1:
            return -alpha(n - 1)
        return -gamma(n - k + 1) * alpha(n - k)

    def b_fn(k):
        return beta(n - k)

    return a_fn, b_fn


def minimal_ratio_forward(rc, n, depth_tol=1e-13, *, max_depth=_CF_MAX_DEPTH,
                          fixed_depth=None):
    """Minimal-solution ratio r_{n+1} = b_{n+1}/b_n by descending CF."""
    alpha, beta, gamma = _row_fns(rc)
    a_fn, b_fn = _forward_cf_terms(alpha, beta, gamma, n)
    if fixed_depth is not None:
        return _cf_fixed_depth(a_fn, b_fn, fixed_depth)
    return _lentz(a_fn, b_fn, depth_tol, max_depth)


def minimal_ratio_backward(rc, n, depth_tol=1e-13, *, max_depth=_CF_MAX_DEPTH,
                           fixed_depth=None):
    """Minimal-solution ratio l_n = b_{n-1}/b_n by ascending CF."""
    alpha, beta, gamma = _row_fns(rc)
    a_fn, b_fn = _backward_cf_terms(alpha, beta, gamma, n)
    if fixed_depth is not None:
        return _cf_fixed_depth(a_fn, b_fn, fixed_depth)
    return _lentz(a_fn, b_fn, depth_tol, max_depth)


# ---------------------------------------------------------------------------
# zero scans (analytic: integer roots of the row's linear factors)


def _row_integer_zero_candidates(prods, lo, hi=None):
    cands = set()
    for prod in prods:
        if prod.c == 0:
            continue
        for lin in prod.num:
            if lin.a == 0:
                continue
            n_star = -lin.b / lin.a
            k = round(n_star.real)
            if abs(n_star - k) >= _INT_TOL * max(1.0, abs(n_star)):
                continue
            if k < lo or (hi is not None and k > hi):
                continue
            cands.add(int(k))
    return sorted(cands)


def _first_row_zero(prods, lo, hi=None, extra=(), value_at=None):
    """Smallest integer n >= lo where the row value is exactly zero."""
    cands = set(_row_integer_zero_candidates(prods, lo, hi))
    for e in extra:
        if e >= lo and (hi is None or e <= hi):
            cands.add(e)
    for k in sorted(cands):
        if value_at is not None:
            if value_at(k):
                return k
        else:
            if _eval_row(prods, k)[0] == 0:
                return k
    return None


def _last_row_zero_below(prods, hi):
    """Largest integer n <= hi where the row value is exactly zero."""
    cands = _row_integer_zero_candidates(prods, -(10**9), hi)
    for k in reversed(cands):
        if _eval_row(prods, k)[0] == 0:
            return k
    return None


# ---------------------------------------------------------------------------
# tail models: estimated term ratio of coefficient x basis at radius R


def _decay_model(family, params, radius):
    eq = family.equation
    if eq in ("CHE", "WI-CHE"):
        z0a = abs(params.z0)
        r = 2 * z0a if radius is None else float(radius)
        if r <= z0a:
            raise ValueError(
                f"evaluation radius {r} is inside the convergence boundary "
                f"|z0| = {z0a}"
            )
        t0 = z0a / r
        return lambda k: t0
    if eq == "DCHE":
        r = max(1.0, abs(params.B1)) if radius is None else float(radius)
        c = 2 * abs(params.omega) * (abs(params.B1) + r)
        return lambda k: c / max(abs(k), 1)
    r = max(1.0, abs(params.B1)) if radius is None else float(radius)
    c = abs(params.q) * (abs(params.B1) + r + 1)
    return lambda k: c / max(abs(k), 1)


def _model_span(tmodel, tail_tol, cap):
    """Terms needed until the modelled geometric tail is below tail_tol."""
    ln_tol = math.log(tail_tol)
    s = 0.0
    k = 0
    while k < cap:
        k += 1
        s += math.log(min(0.95, tmodel(k)))
        t_next = min(0.95, tmodel(k + 1))
        if s + math.log(t_next / (1 - t_next)) < ln_tol:
            break
    return max(k, 8)


# ---------------------------------------------------------------------------
# ratio chains and table assembly


def _peel_down(alpha, beta, gamma_eff, m_hi, m_lo, seed):
    """r_m = -gamma_m/(beta_m + alpha_m r_{m+1}) for m = m_hi..m_lo."""
    out = {}
    cur = seed
    for m in range(m_hi, m_lo - 1, -1):
        den = beta(m) + alpha(m) * cur
        if den == 0:
            den = complex(_LENTZ_TINY)
        cur = -gamma_eff(m) / den
        out[m] = cur
    return out


def _climb_up(alpha, beta, gamma, m_lo, m_hi, seed):
    """l_m = -alpha_{m-1}/(beta_{m-1} + gamma_{m-1} l_{m-1}), m = m_lo..m_hi."""
    out = {m_lo - 1: seed}
    cur = seed
    for m in range(m_lo, m_hi + 1):
        den = beta(m - 1) + gamma(m - 1) * cur
        if den == 0:
            den = complex(_LENTZ_TINY)
        cur = -alpha(m - 1) / den
        out[m] = cur
    del out[m_lo - 1]
    return out


def _chain_table(r_up, l_down, n_min, n_max, start):
    """Accumulate log b_n from the ratio chains, b_start = 1."""
    logmag = {start: 0.0}
    phase = {start: 0.0}
    acc = 0j
    for m in range(start + 1, n_max + 1):
        r = r_up.get(m)
        if r is None or r == 0:
            n_max = m - 1
            break
        acc += cmath.log(r)
        logmag[m] = acc.real
        phase[m] = math.remainder(acc.imag, _TAU)
    acc = 0j
    for m in range(start, n_min, -1):
        l = l_down.get(m)
        if l is None or l == 0:
            n_min = m
            break
        acc += cmath.log(l)
        logmag[m - 1] = acc.real
        phase[m - 1] = math.remainder(acc.imag, _TAU)
    return logmag, phase, n_min, n_max


def two_sided_residual(rc, depth_tol=1e-13, *, fixed_depth=None):
    """Normalized junction residual of the row at n=0.

    Vanishes exactly when nu satisfies the two-sided characteristic
    equation; the root set does not depend on the set index.
    """
    alpha, beta, gamma = _row_fns(rc)
    alpha_row, beta_row, gamma_row = _rows(rc)
    a_fn, b_fn = _forward_cf_terms(alpha, beta, gamma, 0)
    if fixed_depth is not None:
        r1 = _cf_fixed_depth(a_fn, b_fn, fixed_depth)
    else:
        r1 = _lentz(a_fn, b_fn, depth_tol)
    a_fn, b_fn = _backward_cf_terms(alpha, beta, gamma, 0)
    if fixed_depth is not None:
        l0 = _cf_fixed_depth(a_fn, b_fn, fixed_depth)
    else:
        l0 = _lentz(a_fn, b_fn, depth_tol)
    beta0, beta0_scale = _eval_row(beta_row, 0)
    p_plus = _eval_row(alpha_row, 0)[0] * r1
    p_minus = _eval_row(gamma_row, 0)[0] * l0
    scale = max(abs(p_plus), beta0_scale, abs(p_minus), abs(beta0), _TINY)
    return (p_plus + beta0 + p_minus) / scale


def build_two_sided(rc, nu_solved=None, tail_tol=1e-12, *, radius=None,
                    n_cap=2048, root_tol=1e-8, depth_tol=1e-13):
    """Doubly infinite coefficient table at a characteristic root.

    Forward and backward minimal ratios are seeded by continued fractions
    at the far ends and peeled toward the junction row n=0, which must
    balance to root_tol (NotAtRoot otherwise).  The table extends until
    the modelled term tail at the evaluation radius drops below tail_tol,
    or to an exact termination when a row factor vanishes at an integer.
    """
    if rc.family.sided != "two":
        raise ValueError("build_two_sided needs a two-sided family")
    if nu_solved is not None:
        rc = replace(rc, nu=complex(nu_solved))
    alpha, beta, gamma = _row_fns(rc)
    alpha_row, beta_row, gamma_row = _rows(rc)

    n_term = _first_row_zero(gamma_row, 1)
    m_alpha = _last_row_zero_below(alpha_row, -1)
    begin = None if m_alpha is None else m_alpha + 1

    tmodel = _decay_model(rc.family, rc.params, radius)
    span = _model_span(tmodel, tail_tol, n_cap)
    n_max = min(span, n_cap)
    if n_term is not None:
        n_max = min(n_term - 1, n_cap)
    n_min = -min(span, n_cap)
    if begin is not None:
        n_min = max(begin, -n_cap)

    if n_max >= 1:
        if n_term is not None and n_term == n_max + 1:
            seed = 0j
        else:
            a_fn, b_fn = _forward_cf_terms(alpha, beta, gamma, n_max)
            seed = _lentz(a_fn, b_fn, depth_tol)
        r_up = _peel_down(alpha, beta, gamma, n_max, 1, seed)
    else:
        r_up = {}
    if n_min <= -1:
        if begin is not None and begin == n_min:
            seed = 0j
        else:
            a_fn, b_fn = _backward_cf_terms(alpha, beta, gamma, n_min)
            seed = _lentz(a_fn, b_fn, depth_tol)
        l_down = _climb_up(alpha, beta, gamma, n_min + 1, 0, seed)
    else:
        l_down = {}

    r1 = r_up.get(1, 0j)
    l0 = l_down.get(0, 0j)
    beta0, beta0_scale = _eval_row(beta_row, 0)
    p_plus = _eval_row(alpha_row, 0)[0] * r1
    p_minus = _eval_row(gamma_row, 0)[0] * l0
    scale = max(abs(p_plus), beta0_scale, abs(p_minus), abs(beta0), _TINY)
    resid = (p_plus + beta0 + p_minus) / scale
    if abs(resid) > root_tol:
        raise NotAtRoot(resid)

    logmag, phase, n_min, n_max = _chain_table(r_up, l_down, n_min, n_max, 0)
    finite = n_term is not None and begin is not None
    return CoefficientTable(
        nu=rc.nu,
        n_min=n_min,
        n_max=n_max,
        start_index=0,
        finite_flag=finite,
        termination_index=n_term,
        begin_index=begin,
        _logmag=logmag,
        _phase=phase,
    )


# ---------------------------------------------------------------------------
# one-sided systems


def _one_sided_plan(rc, variant, accessory_solved, start):
    """Resolve parameters, variant, start shift and series type.

    Returns (rc, variant, start, kind, n_term) where kind is 'finite' or
    'infinite' and n_term the gamma-zero index for finite series.  The
    start shifts past any alpha-row zero (the rows below then admit only
    the trivial solution); a shifted series drops the first-row payload.
    """
    if rc.family.sided != "one":
        raise ValueError("one-sided build needs a one-sided family")
    params = rc.params
    if accessory_solved is not None:
        params = replace(params, B3=complex(accessory_solved))
        rc = RecurrenceCoeffs(rc.family, params)
    s = 0 if start is None else int(start)
    if s < 0:
        raise ValueError("start must be nonnegative")
    if s == 0:
        var = variant if variant is not None else relation_variant(rc.family, params)
    else:
        if variant is not None:
            raise ValueError("first-row variants apply only to series starting at n=0")
        var = None

    alpha_row, beta_row, gamma_row = _rows(rc)
    while True:
        payload_g1 = (
            var is not None and var.target == "gamma1" and s == 0
        )
        payload = var.payload if var is not None else 0j

        def gamma_zero_at(m):
            v, sc = _eval_row(gamma_row, m)
            if payload_g1 and m == 1:
                tot = v + payload
                return abs(tot) <= _FACTOR_ZERO_RTOL * max(sc, abs(payload), 1.0)
            return v == 0

        extra = (1,) if payload_g1 else ()
        n_gamma = _first_row_zero(gamma_row, s + 1, extra=extra,
                                  value_at=gamma_zero_at)
        n_alpha = _first_row_zero(alpha_row, s)
        if n_gamma is not None and (n_alpha is None or n_gamma <= n_alpha):
            return rc, var, s, "finite", n_gamma
        if n_alpha is not None:
            s = n_alpha + 1
            var = None
            continue
        return rc, var, s, "infinite", None


def _one_sided_effective_rows(rc, var, s):
    alpha, beta, gamma = _row_fns(rc)
    alpha_row, beta_row, gamma_row = _rows(rc)
    payload = var.payload if var is not None else 0j
    g1 = var is not None and var.target == "gamma1" and s == 0
    b0 = var is not None and var.target == "beta0" and s == 0

    def gamma_eff(m):
        v = gamma(m)
        if g1 and m == 1:
            return v + payload
        return v

    def beta_eff_scaled(m):
        v, sc = _eval_row(beta_row, m)
        if b0 and m == 0:
            return v + payload, max(sc, abs(payload))
        return v, sc

    return alpha, beta, gamma_eff, beta_eff_scaled


def _one_sided_gate(rc, var, s, kind, n_term, depth_tol, n_seed=None,
                    fixed_depth=None):
    """Closure residual at the start row plus the ratio chain above it."""
    alpha, beta, gamma_eff, beta_eff_scaled = _one_sided_effective_rows(rc, var, s)
    if kind == "finite" and n_term == s + 1:
        b_val, b_scale = beta_eff_scaled(s)
        resid = b_val / max(b_scale, _TINY)
        return resid, {}
    if kind == "finite":
        r_up = _peel_down(alpha, beta, gamma_eff, n_term - 1, s + 1, 0j)
    else:
        hi = n_seed if n_seed is not None else s + 1
        a_fn, b_fn = _forward_cf_terms(alpha, beta, gamma_eff, hi)
        if fixed_depth is not None:
            seed = _cf_fixed_depth(a_fn, b_fn, fixed_depth)
        else:
            seed = _lentz(a_fn, b_fn, depth_tol)
        r_up = _peel_down(alpha, beta, gamma_eff, hi, s + 1, seed)
    b_val, b_scale = beta_eff_scaled(s)
    p_plus = alpha(s) * r_up[s + 1]
    scale = max(b_scale, abs(p_plus), abs(b_val), _TINY)
    resid = (b_val + p_plus) / scale
    return resid, r_up


def one_sided_residual(rc, variant=None, accessory_solved=None, *, start=None,
                       depth_tol=1e-13, fixed_depth=None):
    """Normalized one-sided characteristic residual (finite or infinite).

    Zero when the accessory parameter sits on the family's characteristic
    equation; finite-series cases return the closure residual of the
    truncated system.
    """
    rc, var, s, kind, n_term = _one_sided_plan(rc, variant, accessory_solved, start)
    resid, _ = _one_sided_gate(rc, var, s, kind, n_term, depth_tol,
                               fixed_depth=fixed_depth)
    return resid


def build_one_sided(rc, variant=None, accessory_solved=None, tail_tol=1e-12, *,
                    start=None, radius=None, n_cap=2048, root_tol=1e-8,
                    depth_tol=1e-13):
    """One-sided coefficient table honoring the first-row variant.

    The series normally starts at n=0 with b_0 = 1.  A vanishing alpha row
    at n = N-1 forces the series to begin at n = N (b_N = 1, plain rows).
    A vanishing gamma row at n = N truncates the series at N-1 and the
    closure of the finite system must hold (InconsistentTruncation
    otherwise); infinite series must satisfy the continued-fraction
    characteristic equation (NotAtRoot otherwise).
    """
    rc, var, s, kind, n_term = _one_sided_plan(rc, variant, accessory_solved, start)

    if kind == "finite":
        resid, r_up = _one_sided_gate(rc, var, s, kind, n_term, depth_tol)
        if abs(resid) > root_tol:
            raise InconsistentTruncation(resid, n_term)
        n_max = n_term - 1
    else:
        tmodel = _decay_model(rc.family, rc.params, radius)
        n_max = s + min(_model_span(tmodel, tail_tol, n_cap), n_cap)
        resid, r_up = _one_sided_gate(rc, var, s, kind, n_term, depth_tol,
                                      n_seed=n_max)
        if abs(resid) > root_tol:
            raise NotAtRoot(resid)

    logmag, phase, n_min, n_max = _chain_table(r_up, {}, s, n_max, s)
    return CoefficientTable(
        nu=rc.nu,
        n_min=s,
        n_max=n_max,
        start_index=s,
        finite_flag=kind == "finite",
        termination_index=n_term,
        begin_index=s if s > 0 else None,
        _logmag=logmag,
        _phase=phase,
    )


# ---------------------------------------------------------------------------
# table verification helpers


def _known_log_entry(table, m, one_sided):
    """(logmag, phase) of b_m, or None when the value is not determined."""
    lm, ph = table.log_entry(m)
    if lm != -math.inf:
        return lm, ph
    if m > table.n_max:
        if table.termination_index is not None and m >= table.termination_index:
            return -math.inf, 0.0
        return None
    if m < table.n_min:
        if one_sided and m < table.start_index:
            return -math.inf, 0.0
        if table.begin_index is not None and m < table.begin_index:
            return -math.inf, 0.0
        return None
    return -math.inf, 0.0


def table_residuals(rc, table, variant=None):
    """Relative residual of every row whose three entries are determined.

    Rows touching coefficients outside the stored range are skipped unless
    that side terminates exactly (the missing entries are then known zeros).
    The first-row payload of a one-sided table starting at n=0 is honored;
    pass the variant used at build time to override the automatic choice.
    """
    one_sided = rc.family.sided == "one"
    if one_sided and variant is None and table.start_index == 0:
        variant = relation_variant(rc.family, rc.params)
    s = table.start_index
    alpha, beta, gamma = _row_fns(rc)
    payload = variant.payload if (one_sided and variant is not None) else 0j
    g1 = one_sided and variant is not None and variant.target == "gamma1" and s == 0
    b0 = one_sided and variant is not None and variant.target == "beta0" and s == 0
    out = {}
    for n in range(table.n_min, table.n_max + 1):
        parts = []
        ok = True
        for role, m in (("alpha", n + 1), ("beta", n), ("gamma", n - 1)):
            known = _known_log_entry(table, m, one_sided)
            if known is None:
                ok = False
                break
            lm, ph = known
            if lm == -math.inf:
                continue
            if role == "alpha":
                coef = alpha(n)
            elif role == "beta":
                coef = beta(n) + (payload if b0 and n == 0 else 0j)
            else:
                coef = gamma(n) + (payload if g1 and n == 1 else 0j)
            if coef == 0:
                continue
            parts.append((coef, lm, ph))
        if not ok:
            continue
        if not parts:
            out[n] = 0.0
            continue
        lmax = max(math.log(abs(c)) + lm for c, lm, _ in parts)
        total = 0j
        tmax = 0.0
        for c, lm, ph in parts:
            term = cmath.rect(math.exp(math.log(abs(c)) + lm - lmax),
                              ph + cmath.phase(c))
            total += term
            tmax = max(tmax, abs(term))
        out[n] = abs(total) / max(tmax, _TINY)
    return out


def max_row_residual(rc, table, variant=None):
    res = table_residuals(rc, table, variant)
    return max(res.values(), default=0.0)

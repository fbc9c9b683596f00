"""Tests for parameter records, transformations, limits and reductions.

The substitution checks use one exact identity throughout: if U solves the
target equation U'' + p1 U' + p0 U = 0 and w(u) = P(z(u)) U(z(u)) solves
the source equation w'' + s1 w' + s0 w = 0, then with L = log P

  p1(z) = 2 L' + z''/(z')^2 + s1/z'
  p0(z) = L'' + L'^2 + L' z''/(z')^2 + s1 L'/z' + s0/(z')^2

pointwise (derivatives of L in z, of z in u).  Both sides are closed form,
so the residual is pure roundoff when the maps are right.
"""

import cmath
import json
import warnings

import numpy as np
import pytest

from heunser import params as P


def _cbox(rng, scale=2.0):
    return complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))


def _map_residual(src_coeffs, tgt_params, vm, pf, u):
    s1, s0 = src_coeffs(u)
    z = vm.z_of(u)
    zp = vm.dz_du(u)
    zpp = vm.d2z_du2(u)
    lp = pf.dlog_at(z)
    lpp = pf.d2log_at(z)
    p1, p0 = tgt_params.ode_coeffs(z)
    r1 = p1 - (2.0 * lp + zpp / zp ** 2 + s1 / zp)
    r0 = p0 - (lpp + lp ** 2 + lp * zpp / zp ** 2 + s1 * lp / zp
               + s0 / zp ** 2)
    sc1 = max(1.0, abs(p1), abs(s1 / zp))
    sc0 = max(1.0, abs(p0), abs(s0 / zp ** 2), abs(lp) ** 2)
    return max(abs(r1) / sc1, abs(r0) / sc0)


def _rand_che(rng):
    return P.CheParams(_cbox(rng), _cbox(rng), _cbox(rng),
                       _cbox(rng) + 3.0, _cbox(rng), _cbox(rng))


def _rand_dche(rng):
    return P.DcheParams(_cbox(rng) + 3.0, _cbox(rng), _cbox(rng),
                        _cbox(rng) + 3.0, _cbox(rng))


def _rand_wiche(rng):
    return P.WiCheParams(_cbox(rng), _cbox(rng), _cbox(rng),
                         _cbox(rng) + 3.0, _cbox(rng) + 3.0)


def _rand_widche(rng):
    return P.WiDcheParams(_cbox(rng) + 3.0, _cbox(rng), _cbox(rng),
                          _cbox(rng) + 3.0)


def _fields(p):
    return {"che": ("B1", "B2", "B3", "z0", "omega", "eta"),
            "dche": ("B1", "B2", "B3", "omega", "eta"),
            "wiche": ("B1", "B2", "B3", "z0", "q"),
            "widche": ("B1", "B2", "B3", "q")}[p.family]


def _param_dist(a, b):
    assert type(a) is type(b)
    return max(abs(getattr(a, f) - getattr(b, f)) for f in _fields(a))


# ---------------------------------------------------------------------------
# record validation


def test_record_validation():
    with pytest.raises(ValueError, match="DcheParams"):
        P.CheParams(1.0, 1.0, 1.0, 0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        P.DcheParams(0.0, 1.0, 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        P.DcheParams(1.0, 1.0, 1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        P.WiCheParams(1.0, 1.0, 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        P.WiCheParams(1.0, 1.0, 1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        P.WiDcheParams(1.0, 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        P.WiDcheParams(0.0, 1.0, 1.0, 1.0)
    p = P.CheParams(1, 2, 3, 4, 5, 6)
    assert isinstance(p.B1, complex) and p.z0 == 4.0 + 0j
    assert p.family == "che"


def test_ode_coeffs_forms():
    p = P.CheParams(0.5, -1.0, 2.0, 1.0, 0.7, 0.3)
    z = 3.0 + 1.0j
    lead = z * (z - 1.0)
    p1, p0 = p.ode_coeffs(z)
    assert abs(p1 - (0.5 - z) / lead) < 1e-15
    want = (2.0 - 2.0 * 0.3 * 0.7 * (z - 1.0) + 0.49 * lead) / lead
    assert abs(p0 - want) < 1e-15
    d = P.DcheParams(0.5, -1.0, 2.0, 0.7, 0.3)
    p1, p0 = d.ode_coeffs(z)
    assert abs(p1 - (0.5 - z) / z ** 2) < 1e-15
    assert abs(p0 - (2.0 - 0.42 * z + 0.49 * z ** 2) / z ** 2) < 1e-15
    w = P.WiCheParams(0.5, -1.0, 2.0, 1.0, 1.5)
    p1, p0 = w.ode_coeffs(z)
    assert abs(p0 - (2.0 + 1.5 * (z - 1.0)) / lead) < 1e-15
    v = P.WiDcheParams(0.5, -1.0, 2.0, 1.5)
    p1, p0 = v.ode_coeffs(z)
    assert abs(p0 - (2.0 + 1.5 * z) / z ** 2) < 1e-15


# ---------------------------------------------------------------------------
# prefactors and variable maps


def test_prefactor_evaluation_and_derivatives():
    rng = np.random.default_rng(11)
    pf = P.PrefactorSpec((P.Factor("z_pow", 0.7 - 0.2j),
                          P.Factor("zmz0_pow", -1.3 + 0.4j, 1.0),
                          P.Factor("exp_linear", 0.3j),
                          P.Factor("exp_inv", 0.8 - 0.1j),
                          P.Factor("const", 2.0 - 1.0j)))
    for _ in range(20):
        z = complex(rng.uniform(2.0, 5.0), rng.uniform(0.1, 2.0))
        assert abs(pf.at(z) - cmath.exp(pf.log_at(z))) < 1e-12 * abs(pf.at(z))
        h = 1e-6
        d_num = (pf.log_at(z + h) - pf.log_at(z - h)) / (2.0 * h)
        assert abs(pf.dlog_at(z) - d_num) < 1e-7 * max(1.0, abs(d_num))
        d2_num = (pf.dlog_at(z + h) - pf.dlog_at(z - h)) / (2.0 * h)
        assert abs(pf.d2log_at(z) - d2_num) < 1e-7 * max(1.0, abs(d2_num))


def test_prefactor_singular_points_and_product():
    pf = P.PrefactorSpec((P.Factor("z_pow", 0.5),
                          P.Factor("zmz0_pow", -0.5, 2.0)))
    assert set(pf.singular_points()) == {0.0, 2.0}
    smooth = P.PrefactorSpec((P.Factor("z_pow", 3.0),
                              P.Factor("exp_linear", 1.0j),
                              P.Factor("const", 5.0)))
    assert smooth.singular_points() == ()
    assert P.PrefactorSpec((P.Factor("exp_inv", 1.0),)).singular_points() \
        == (0.0,)
    both = pf * smooth
    z = 3.0 + 0.5j
    assert abs(both.at(z) - pf.at(z) * smooth.at(z)) < 1e-12 * abs(both.at(z))
    assert P.PrefactorSpec.identity().at(z) == 1.0
    with pytest.raises(ValueError):
        P.Factor("cosine", 1.0)


def test_variable_map_derivatives():
    rng = np.random.default_rng(13)
    maps = [P.VariableMap("identity"), P.VariableMap("reflect", 1.0),
            P.VariableMap("inverse", 0.5j),
            P.VariableMap("cos2_half", 1.1),
            P.VariableMap("cos2", 0.9), P.VariableMap("exp_i", 1.2),
            P.VariableMap("exp_2i", 0.8), P.VariableMap("half_shift"),
            P.VariableMap("cosh2")]
    h = 1e-6
    for vm in maps:
        assert vm.formula
        for _ in range(10):
            u = complex(rng.uniform(0.4, 1.8), rng.uniform(-0.2, 0.2))
            d_num = (vm.z_of(u + h) - vm.z_of(u - h)) / (2.0 * h)
            assert abs(vm.dz_du(u) - d_num) < 1e-7 * max(1.0, abs(d_num))
            d2_num = (vm.dz_du(u + h) - vm.dz_du(u - h)) / (2.0 * h)
            assert abs(vm.d2z_du2(u) - d2_num) < 1e-7 * max(1.0, abs(d2_num))
    with pytest.raises(ValueError):
        P.VariableMap("sqrt")


# ---------------------------------------------------------------------------
# transformation groups


def test_che_transformations_are_involutions():
    rng = np.random.default_rng(17)
    for _ in range(25):
        p = _rand_che(rng)
        for name in ("T1", "T2", "T3", "T4"):
            new, spec = P.transform_che(name, p)
            assert spec.name == name and spec.target is new
            back, _ = P.transform_che(name, new)
            assert _param_dist(back, p) < 1e-13


def test_che_group_relation():
    # applying the reflection after the second index change equals applying
    # the first index change after the reflection
    rng = np.random.default_rng(19)
    for _ in range(25):
        p = _rand_che(rng)
        a, _ = P.transform_che("T4", P.transform_che("T2", p)[0])
        b, _ = P.transform_che("T1", P.transform_che("T4", p)[0])
        assert _param_dist(a, b) < 1e-13


def test_che_transformations_map_solutions():
    rng = np.random.default_rng(23)
    for _ in range(10):
        p = _rand_che(rng)
        for name in ("T1", "T2", "T3", "T4"):
            new, spec = P.transform_che(name, p)
            for _ in range(5):
                u = _cbox(rng, 2.0) + 6.0
                assert _map_residual(p.ode_coeffs, new, spec.var_map,
                                     spec.prefactor, u) < 1e-12


def test_wiche_transformations():
    rng = np.random.default_rng(29)
    for _ in range(10):
        p = _rand_wiche(rng)
        for name in ("WT1", "WT2", "WT3"):
            new, spec = P.transform_wiche(name, p)
            back, _ = P.transform_wiche(name, new)
            assert _param_dist(back, p) < 1e-13
            for _ in range(5):
                u = _cbox(rng, 2.0) + 6.0
                assert _map_residual(p.ode_coeffs, new, spec.var_map,
                                     spec.prefactor, u) < 1e-12
    alias, _ = P.transform_wiche("\N{MATHEMATICAL SCRIPT CAPITAL T}3",
                                 P.WiCheParams(1.0, 2.0, 3.0, 1.0, 2.0))
    direct, _ = P.transform_wiche("WT3", P.WiCheParams(1.0, 2.0, 3.0,
                                                       1.0, 2.0))
    assert _param_dist(alias, direct) == 0.0


def test_dche_transformations():
    rng = np.random.default_rng(31)
    for _ in range(10):
        p = _rand_dche(rng)
        for name in ("t1", "t2", "t3"):
            new, spec = P.transform_dche(name, p)
            for _ in range(5):
                u = _cbox(rng, 2.0) + 5.0
                assert _map_residual(p.ode_coeffs, new, spec.var_map,
                                     spec.prefactor, u) < 1e-12
        for name in ("t1", "t3"):
            new, _ = P.transform_dche(name, p)
            back, _ = P.transform_dche(name, new)
            assert _param_dist(back, p) < 1e-13


def test_dche_t2_squares_to_scaling_gauge():
    # two inversions compose to z -> omega z, which rescales B1 and omega
    rng = np.random.default_rng(37)
    for _ in range(25):
        p = _rand_dche(rng)
        twice, _ = P.transform_dche("t2", P.transform_dche("t2", p)[0])
        gauge = P.DcheParams(p.omega * p.B1, p.B2, p.B3, 1.0, p.eta)
        assert _param_dist(twice, gauge) < 1e-13


def test_widche_transformation():
    rng = np.random.default_rng(41)
    for _ in range(10):
        p = _rand_widche(rng)
        new, spec = P.transform_widche(p)
        back, _ = P.transform_widche(new)
        assert _param_dist(back, p) < 1e-13
        for _ in range(5):
            u = _cbox(rng, 2.0) + 5.0
            assert _map_residual(p.ode_coeffs, new, spec.var_map,
                                 spec.prefactor, u) < 1e-12


def test_transform_type_and_name_errors():
    che = P.CheParams(1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    dche = P.DcheParams(1.0, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(TypeError):
        P.transform_che("T1", dche)
    with pytest.raises(TypeError):
        P.transform_dche("t1", che)
    with pytest.raises(ValueError):
        P.transform_che("T5", che)
    with pytest.raises(ValueError):
        P.transform_dche("t4", dche)


def test_transform_spec_carry():
    p = P.CheParams(0.5, -1.5, 2.0, 1.0, 0.7, 0.3)
    new, spec = P.transform_che("T1", p)
    z = 2.0 + 1.0j
    r = p.B1 / p.z0
    assert abs(spec.carry(z, 1.0) - z ** (1.0 + r)) < 1e-14
    new, spec = P.transform_che("T4", p)
    assert spec.var_map.z_of(z) == p.z0 - z
    assert spec.carry(z, 3.0 + 0j) == 3.0 + 0j


# ---------------------------------------------------------------------------
# limit maps


def test_whittaker_ince_limit():
    p = P.CheParams(0.5, -1.5, 2.0, 1.0, 0.25, -3.0)
    w = P.whittaker_ince_limit(p)
    assert isinstance(w, P.WiCheParams)
    assert abs(w.q - 1.5) < 1e-15
    assert (w.B1, w.B2, w.B3, w.z0) == (p.B1, p.B2, p.B3, p.z0)
    w2 = P.whittaker_ince_limit(p, q=2.0)
    assert w2.q == 2.0
    flat = P.CheParams(0.5, -1.5, 2.0, 1.0, 0.0, -3.0)
    with pytest.raises(P.InvalidLimit):
        P.whittaker_ince_limit(flat)
    # the omega -> 0 family through q: coefficient gap is exactly omega^2
    z = 2.5 + 0.4j
    for eps in (1e-2, 1e-3):
        fam = P.CheParams(p.B1, p.B2, p.B3, p.z0, eps, -0.75 / eps)
        _, p0_eps = fam.ode_coeffs(z)
        _, p0_lim = P.whittaker_ince_limit(p).ode_coeffs(z)
        assert abs(p0_eps - p0_lim - eps ** 2) < 1e-12


def test_leaver_limit():
    p = P.CheParams(0.5, -1.5, 2.0, 1.0, 0.25, -3.0)
    d = P.leaver_limit(p)
    assert isinstance(d, P.DcheParams)
    assert (d.B1, d.B2, d.B3, d.omega, d.eta) == \
        (p.B1, p.B2, p.B3, p.omega, p.eta)
    with pytest.raises(P.InvalidLimit):
        P.leaver_limit(P.CheParams(0.0, 1.0, 1.0, 1.0, 1.0, 1.0))
    with pytest.raises(P.InvalidLimit):
        P.leaver_limit(P.CheParams(1.0, 1.0, 1.0, 1.0, 0.0, 1.0))


def test_wi_of_dche():
    p = P.DcheParams(0.5, -1.5, 2.0, 0.25, -3.0)
    w = P.wi_of_dche(p)
    assert isinstance(w, P.WiDcheParams)
    assert abs(w.q - 1.5) < 1e-15
    with pytest.raises(P.InvalidLimit):
        P.wi_of_dche(P.DcheParams(0.5, -1.5, 2.0, 0.25, 0.0))
    # records whose B2 tracks eta cannot take the limit
    coupled = P.DcheParams(0.5, 2.0 + 2.0j * 1.3, 2.0, 0.25, 1.3)
    with pytest.raises(P.InvalidLimit):
        P.wi_of_dche(coupled)
    # B2 = 2 with eta = 0 is an ordinary constant, not a coupling
    free = P.DcheParams(0.5, 2.0, 2.0, 0.25, 0.0)
    assert P.wi_of_dche(free, q=1.5).q == 1.5


# ---------------------------------------------------------------------------
# reductions


def _check_reduction(source, target, rng, npts=10, where=None):
    pp, vm, pf = P.reduce(source, target)
    worst = 0.0
    for _ in range(npts):
        u = where(rng) if where else complex(rng.uniform(0.3, 1.4),
                                             rng.uniform(0.05, 0.35))
        worst = max(worst, _map_residual(source.ode_coeffs, pp, vm, pf, u))
    assert worst < 1e-12
    return pp


def test_mathieu_reductions():
    rng = np.random.default_rng(43)
    for _ in range(5):
        m = P.Mathieu(_cbox(rng), _cbox(rng) + 2.5,
                      complex(rng.uniform(0.7, 1.4), rng.uniform(-0.1, 0.1)))
        for tgt in ("che", "wiche", "dche"):
            _check_reduction(m, tgt, rng)
    m = P.Mathieu(1.0, 0.5)
    che, vm, pf = P.reduce(m, "che")
    assert _param_dist(che, P.CheParams(-0.5, 1.0, -0.5, 1.0, 2.0, 0.0)) == 0
    assert vm.kind == "cos2_half" and pf.factors == ()
    wic, vm, _ = P.reduce(m, "wiche")
    assert _param_dist(wic, P.WiCheParams(-0.5, 1.0, -0.125, 1.0, 0.25)) == 0
    dch, vm, pf = P.reduce(m, "dche")
    assert _param_dist(dch, P.DcheParams(-1.0j, 2.0, -0.75, 0.5, 0.0)) == 0
    assert vm.kind == "exp_i" and len(pf.factors) == 2
    with pytest.raises(P.UnsupportedReduction):
        P.reduce(m, "widche")


def test_whittaker_hill_reductions():
    rng = np.random.default_rng(47)
    for _ in range(5):
        w = P.Whe(_cbox(rng), _cbox(rng) + 2.5, _cbox(rng),
                  complex(rng.uniform(0.7, 1.4), rng.uniform(-0.1, 0.1)))
        for tgt in ("che", "dche"):
            _check_reduction(w, tgt, rng)
    w = P.Whe(2.0, 0.8, 1.0)
    che, _, _ = P.reduce(w, "che")
    assert _param_dist(che, P.CheParams(-0.5, 1.0, -0.1, 1.0,
                                        -0.4j, -1.0j)) < 1e-15
    with pytest.raises(P.UnsupportedReduction):
        P.reduce(w, "wiche")


def test_spheroidal_reduction():
    rng = np.random.default_rng(53)
    for sign in (1, -1):
        for _ in range(5):
            s = P.Spheroidal(_cbox(rng) + 2.0, _cbox(rng), _cbox(rng), sign)
            _check_reduction(s, "che", rng,
                             where=lambda r: _cbox(r, 2.0) + 5.0)
    s = P.Spheroidal(0.7, 2.0, 0.3)
    che, vm, pf = P.reduce(s, "che")
    assert _param_dist(che, P.CheParams(-1.3, 2.6, 0.3 * 1.3 - 2.0,
                                        1.0, -1.4, 0.0)) < 1e-15
    assert vm.kind == "half_shift" and len(pf.factors) == 2
    with pytest.raises(P.UnsupportedReduction):
        P.reduce(s, "dche")


def test_qes_reductions():
    rng = np.random.default_rng(59)
    for sign in (1, -1):
        for _ in range(4):
            ush = P.Ushveridze(complex(rng.uniform(0.5, 2.0)),
                               _cbox(rng) + 1.5, _cbox(rng) + 1.5,
                               _cbox(rng), _cbox(rng), sign)
            _check_reduction(ush, "che", rng,
                             where=lambda r: complex(r.uniform(0.6, 1.5),
                                                     r.uniform(0.05, 0.3)))
    for g in (0.25, 0.75):
        for d in (0.25, 0.75):
            uw = P.UshveridzeWheCase(1.0, g, d, 2.0, energy=-3.0)
            _check_reduction(uw, "che", rng,
                             where=lambda r: complex(r.uniform(0.6, 1.5),
                                                     r.uniform(0.05, 0.3)))
    # worked record: beta=1, gamma=delta=1/4, ell=0, default sign
    uw = P.UshveridzeWheCase(1.0, 0.25, 0.25, 0.0, energy=2.0)
    che, vm, pf = P.reduce(uw, "che")
    assert _param_dist(che, P.CheParams(-0.5, 1.0, 0.5, 1.0,
                                        1.0j, 0.5j)) < 1e-15
    assert vm.kind == "cosh2" and pf.factors == ()
    with pytest.raises(ValueError):
        P.UshveridzeWheCase(1.0, 0.5, 0.25, 0.0)
    with pytest.raises(P.UnsupportedReduction):
        P.reduce(P.Ushveridze(1.0, 0.3, 0.6, 0.0), "dche")


def test_qes_reality_warnings():
    with pytest.warns(UserWarning):
        P.Ushveridze(-1.0, 0.3, 0.6, 0.0)
    with pytest.warns(UserWarning):
        P.Ushveridze(1.0, 0.3, 0.1, 0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        P.Ushveridze(1.0, 0.3, 0.6, 0.0)


def test_unknown_source_rejected():
    with pytest.raises(P.UnsupportedReduction):
        P.reduce(object(), "che")


# ---------------------------------------------------------------------------
# JSON round trip


def test_json_round_trip():
    rng = np.random.default_rng(61)
    for make in (_rand_che, _rand_dche, _rand_wiche, _rand_widche):
        for _ in range(5):
            p = make(rng)
            d = json.loads(json.dumps(P.params_to_dict(p)))
            q = P.params_from_dict(d)
            assert _param_dist(p, q) == 0.0
            assert set(d) == {"family", *_fields(p)}
            assert all(set(v) == {"re", "im"} for k, v in d.items()
                       if k != "family")
    with pytest.raises(ValueError):
        P.params_from_dict({"family": "sextic"})
    # plain numbers are accepted on input for convenience
    p = P.params_from_dict({"family": "widche", "B1": 1.5, "B2": 0.0,
                            "B3": {"re": 2.0}, "q": 1.0})
    assert p.B1 == 1.5 and p.B3 == 2.0

"""Development-time oracle generator.

Produces high-precision reference values (mpmath, 40 digits) for the frozen
literals in the test suite.  Run manually:

    python tools/gen_oracle_values.py

and paste the printed blocks into the tests.  mpmath is a dev-only
dependency; neither the library nor the test suite imports it.
"""

import mpmath as mp

mp.mp.dps = 40


def c(x):
    """Format an mpmath complex as a Python complex literal."""
    x = mp.mpmathify(x)
    return f"({float(x.real)!r}{'+' if float(x.imag) >= 0 else '-'}{abs(float(x.imag))!r}j)"


def hyp_phi(a, cc, y):
    return mp.hyp1f1(a, cc, y)


def hyp_psi(a, cc, y):
    return mp.hyperu(a, cc, y)


def coulomb_phi(kappa, eta, y):
    return (mp.e ** (1j * y) * (2j * y) ** (kappa + 1)
            / mp.gamma(2 * kappa + 2)
            * mp.hyp1f1(kappa + 1 + 1j * eta, 2 * kappa + 2, -2j * y))


def coulomb_psi(sign, kappa, eta, y):
    return (sign * 2j * mp.e ** (mp.pi * eta) * mp.e ** (sign * 1j * y)
            * (-2j * y) ** (kappa + 1)
            / mp.gamma(kappa + 1 - sign * 1j * eta)
            * mp.hyperu(kappa + 1 + sign * 1j * eta, 2 * kappa + 2,
                        -sign * 2j * y))


def leaver_norm(n, nu, eta):
    return (mp.mpf(1) / 2 * mp.e ** (-eta * mp.pi / 2)
            * (-1j) ** (n + nu + 1)
            * mp.sqrt(mp.gamma(n + nu + 1 + 1j * eta)
                      * mp.gamma(n + nu + 1 - 1j * eta)))


def main():
    print("# gamma / gammaln")
    for z in [mp.mpc(3.7, 1.2), mp.mpc(-2.3, 0.4), mp.mpc(0.5, -8.0),
              mp.mpc(25.0, 3.0)]:
        print(f"GAMMA[{c(z)}] = {c(mp.gamma(z))}")

    print("\n# phi_hyp (regular confluent)")
    phi_cases = [
        (mp.mpc(0.3, 0.7), mp.mpc(1.1, -0.2), mp.mpc(2.5, 1.0)),
        (mp.mpc(2.0, -1.0), mp.mpc(0.4, 0.9), mp.mpc(-6.0, 2.0)),
        (mp.mpc(-3.0, 0.0), mp.mpc(1.7, 0.3), mp.mpc(4.0, -5.0)),
        (mp.mpc(1.2, 0.5), mp.mpc(3.4, 0.1), mp.mpc(60.0, 25.0)),
        (mp.mpc(0.8, -0.3), mp.mpc(2.2, 0.4), mp.mpc(-70.0, 10.0)),
    ]
    for a, cc, y in phi_cases:
        print(f"PHI[{c(a)}, {c(cc)}, {c(y)}] = {c(hyp_phi(a, cc, y))}")

    print("\n# psi_hyp (irregular confluent)")
    psi_cases = [
        (mp.mpc(0.3, 0.7), mp.mpc(1.4, -0.2), mp.mpc(2.5, 1.0)),
        (mp.mpc(2.0, -1.0), mp.mpc(0.4, 0.9), mp.mpc(1.0, 3.0)),
        (mp.mpc(1.2, 0.5), mp.mpc(3.3, 0.1), mp.mpc(0.0, -2.0)),
        (mp.mpc(0.8, -0.3), mp.mpc(2.2, 0.4), mp.mpc(80.0, 10.0)),
        (mp.mpc(1.5, 0.0), mp.mpc(0.6, 0.0), mp.mpc(-3.0, 1.5)),
    ]
    for a, cc, y in psi_cases:
        print(f"PSI[{c(a)}, {c(cc)}, {c(y)}] = {c(hyp_psi(a, cc, y))}")

    print("\n# bessel_z kinds 1..4 (besselj/bessely/hankel1/hankel2)")
    bes_cases = [
        (mp.mpc(0.3, 0.0), mp.mpc(2.0, 0.0)),
        (mp.mpc(1.7, 0.4), mp.mpc(3.0, 1.0)),
        (mp.mpc(-0.6, 0.2), mp.mpc(1.5, -2.0)),
        (mp.mpc(2.5, 0.0), mp.mpc(5.0, 0.0)),      # half-integer order
        (mp.mpc(3.0, 0.0), mp.mpc(2.0, 1.0)),      # integer order
        (mp.mpc(0.9, -0.5), mp.mpc(70.0, 8.0)),    # large argument
    ]
    for kap, y in bes_cases:
        print(f"J[{c(kap)}, {c(y)}] = {c(mp.besselj(kap, y))}")
        print(f"Y[{c(kap)}, {c(y)}] = {c(mp.bessely(kap, y))}")
        print(f"H1[{c(kap)}, {c(y)}] = {c(mp.hankel1(kap, y))}")
        print(f"H2[{c(kap)}, {c(y)}] = {c(mp.hankel2(kap, y))}")

    print("\n# coulomb family")
    cou_cases = [
        (mp.mpc(0.3, 0.2), mp.mpc(0.4, -0.1), mp.mpc(1.5, 0.5)),
        (mp.mpc(3.3, 0.2), mp.mpc(1.0, 0.0), mp.mpc(6.0, -1.0)),
        (mp.mpc(-2.7, 0.2), mp.mpc(0.0, 0.6), mp.mpc(2.0, 2.0)),
    ]
    for kap, eta, y in cou_cases:
        print(f"CPHI[{c(kap)}, {c(eta)}, {c(y)}] = "
              f"{c(coulomb_phi(kap, eta, y))}")
        print(f"CPSIP[{c(kap)}, {c(eta)}, {c(y)}] = "
              f"{c(coulomb_psi(1, kap, eta, y))}")
        print(f"CPSIM[{c(kap)}, {c(eta)}, {c(y)}] = "
              f"{c(coulomb_psi(-1, kap, eta, y))}")

    print("\n# leaver normalization")
    for n, nu, eta in [(3, mp.mpc(0.25, 0.0), mp.mpc(0.0, 1.3)),
                       (-2, mp.mpc(0.3, 0.1), mp.mpc(0.7, -0.2))]:
        print(f"GN[{n}, {c(nu)}, {c(eta)}] = {c(leaver_norm(n, nu, eta))}")

    print("\n# laguerre")
    for ell, al, y in [(4, mp.mpc(0.5, 0.0), mp.mpc(1.3, -0.7)),
                       (2, mp.mpc(-0.3, 0.8), mp.mpc(-2.0, 0.4))]:
        print(f"LAG[{ell}, {c(al)}, {c(y)}] = "
              f"{c(mp.laguerre(ell, al, y))}")


if __name__ == "__main__":
    main()

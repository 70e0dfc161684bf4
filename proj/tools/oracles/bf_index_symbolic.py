#!/usr/bin/env python3
"""Symbolic evaluation of the Benjamin-Feir index display (delta_BF) and the
small-amplitude coefficient a0, used to freeze fixture values.

The display is evaluated verbatim with sympy rationals; P denotes the
recurring prefactor (1/2) (kappa(2 rho0)/(2 rho0)) (2 pi / X0)^2, which by the
harmonic-period formula equals (1/2) d2Wrho(rho0).
"""

import sympy as sp


def delta_bf(K, K1, K2, W2, W3, W4, rho0, P):
    """K = kappa(2 rho0), K1 = kappa'(2 rho0), K2 = kappa''(2 rho0),
    Wk = W^(k)(2 rho0), P = (1/2)(K/(2 rho0))(2 pi/X0)^2."""
    r = sp.Rational(1, 2) / rho0  # 1/(2 rho0)
    kr = K1 / K
    return (P**3 * (-3 * kr**2 - 2 * kr * r + K2 / K)
            + P**2 * (W2 * (-12 * kr**2 - 6 * kr * r + 4 * r**2 + 3 * K2 / K)
                      + 4 * W3 * (kr + 2 * r) + 2 * W4)
            + P * (12 * W2**2 * (kr**2 + 4 * kr * r + 3 * r**2)
                   + 8 * W2 * W3 * (4 * kr + 5 * r)
                   + sp.Rational(4, 3) * W3**2 + 6 * W2 * W4)
            + 8 * W2 * (W3 + 3 * W2 * (kr + r))**2)


def harmonic_data(kappa_poly, W_poly, c_x, rho0, kphi0):
    """Harmonic-point parameters for polynomial kappa, W (sympy exprs in a)."""
    a = sp.Symbol('a')
    al0 = 2 * rho0
    K = kappa_poly.subs(a, al0)
    K1 = sp.diff(kappa_poly, a).subs(a, al0)
    Wp = sp.diff(W_poly, a)
    mu_phi0 = c_x * rho0 + K * 2 * rho0 * kphi0
    om0 = c_x * kphi0 + (K1 * 2 * rho0 + K) * kphi0**2 + 2 * Wp.subs(a, al0)
    # effective potential and its rho-derivatives
    rho = sp.Symbol('rho', positive=True)
    kap = kappa_poly.subs(a, 2 * rho)
    nu = (mu_phi0 - c_x * rho) / (2 * rho * kap)
    Wr = (-W_poly.subs(a, 2 * rho) - kap * rho * nu**2 + om0 * rho
          + mu_phi0 * nu - c_x * rho * nu)
    d1 = sp.simplify(sp.diff(Wr, rho).subs(rho, rho0))
    d2 = sp.simplify(sp.diff(Wr, rho, 2).subs(rho, rho0))
    d3 = sp.simplify(sp.diff(Wr, rho, 3).subs(rho, rho0))
    d4 = sp.simplify(sp.diff(Wr, rho, 4).subs(rho, rho0))
    mu_x0 = sp.simplify(Wr.subs(rho, rho0))
    return dict(mu_phi0=mu_phi0, om0=om0, mu_x0=mu_x0,
                d1=d1, d2=d2, d3=d3, d4=d4, K=K)


def a0_coefficient(kappa_poly, W_poly, c_x, rho0, kphi0):
    """Small-amplitude coefficient:
    a0 = 1/(8 d2^3) [ 5/3 d3^2 - d2 d4 - 4 d2 d3 (kappa'(2r)/kappa(2r) - 1/(2r))
                      + 16 d2^2 (kappa''/kappa - kappa'/(2r kappa) + 1/(2r^2)) ]
    evaluated at rho0 with dk = d^k Wrho/drho^k."""
    a = sp.Symbol('a')
    h = harmonic_data(kappa_poly, W_poly, c_x, rho0, kphi0)
    al0 = 2 * rho0
    K = kappa_poly.subs(a, al0)
    K1 = sp.diff(kappa_poly, a).subs(a, al0)
    K2 = sp.diff(kappa_poly, a, 2).subs(a, al0)
    d2, d3, d4 = h['d2'], h['d3'], h['d4']
    return sp.simplify(
        (sp.Rational(5, 3) * d3**2 - d2 * d4
         - 4 * d2 * d3 * (K1 / K - 1 / (2 * rho0))
         + 16 * d2**2 * (K2 / K - K1 / (2 * rho0 * K) + 1 / (2 * rho0**2)))
        / (8 * d2**3))


def main():
    a = sp.Symbol('a')
    REF_k, REF_W = sp.Integer(1), -a**2 / 8
    REFD_k, REFD_W = sp.Integer(1), a**2 / 8

    print("== REF harmonic point (c_x=0, rho0=1, kphi0=0) ==")
    h = harmonic_data(REF_k, REF_W, 0, 1, 0)
    print("mu_phi0 =", h['mu_phi0'], " om0 =", h['om0'], " mu_x0 =", h['mu_x0'])
    print("dWrho:", h['d1'], h['d2'], h['d3'], h['d4'])
    P = sp.Rational(1, 2) * h['d2']
    W2 = sp.diff(REF_W, a, 2).subs(a, 2)
    print("delta_hyp =", W2)  # kappa' = kappa'' = 0
    print("delta_BF  =", delta_bf(1, 0, 0, W2, 0, 0, 1, P))
    print("a0        =", a0_coefficient(REF_k, REF_W, 0, 1, 0))

    print()
    print("== REF-D diagnostic (c_x=0, rho0=1, kphi0=0): saddle side ==")
    h = harmonic_data(REFD_k, REFD_W, 0, 1, 0)
    print("mu_phi0 =", h['mu_phi0'], " om0 =", h['om0'], " mu_x0 =", h['mu_x0'])
    print("d2Wrho =", h['d2'], " (< 0: not a minimum)")
    P = sp.Rational(1, 2) * h['d2']
    W2 = sp.diff(REFD_W, a, 2).subs(a, 2)
    print("delta_BF (diagnostic) =", delta_bf(1, 0, 0, W2, 0, 0, 1, P))

    print()
    print("== REF-D harmonic member (c_x=0, rho0=1, kphi0=1) ==")
    h = harmonic_data(REFD_k, REFD_W, 0, 1, 1)
    print("mu_phi0 =", h['mu_phi0'], " om0 =", h['om0'], " mu_x0 =", h['mu_x0'])
    print("dWrho: d1 =", h['d1'], " d2 =", h['d2'], " d3 =", h['d3'],
          " d4 =", h['d4'])
    P = sp.Rational(1, 2) * h['d2']
    W2 = sp.diff(REFD_W, a, 2).subs(a, 2)
    print("delta_hyp =", W2)
    print("delta_BF  =", delta_bf(1, 0, 0, W2, 0, 0, 1, P))
    print("a0        =", a0_coefficient(REFD_k, REFD_W, 0, 1, 1))
    X0 = 2 * sp.pi * sp.sqrt(sp.Integer(1) / (2 * 1 * h['d2']))
    print("X0        =", sp.simplify(X0), "=", float(X0))

    print()
    print("== REF-D harmonic member (c_x=0, rho0=1, kphi0=4/5) ==")
    h = harmonic_data(REFD_k, REFD_W, 0, 1, sp.Rational(4, 5))
    P = sp.Rational(1, 2) * h['d2']
    print("d2Wrho =", h['d2'])
    print("delta_BF =", delta_bf(1, 0, 0, W2, 0, 0, 1, P), "=",
          float(delta_bf(1, 0, 0, W2, 0, 0, 1, P)))

    print()
    print("== scaling probe: W -> s W (kappa=1, rho0=1, kphi0=0) ==")
    s = sp.Symbol('s')
    for sval in (1, 2):
        hW = harmonic_data(sp.Integer(1), sval * REF_W, 0, 1, 0)
        P = sp.Rational(1, 2) * hW['d2']
        W2 = sp.diff(sval * REF_W, a, 2).subs(a, 2)
        W3 = sp.diff(sval * REF_W, a, 3).subs(a, 2)
        W4 = sp.diff(sval * REF_W, a, 4).subs(a, 2)
        g3 = P**3 * 0
        g2 = P**2 * (W2 * 4 * sp.Rational(1, 4) + 0 + 2 * W4)
        g1 = P * (12 * W2**2 * 3 * sp.Rational(1, 4) + sp.Rational(4, 3) * W3**2
                  + 6 * W2 * W4)
        g0 = 8 * W2 * (W3 + 3 * W2 * sp.Rational(1, 2))**2
        print(f"s={sval}: P={P} groups=({g3},{g2},{g1},{g0}) "
              f"delta_BF={delta_bf(1, 0, 0, W2, W3, W4, 1, P)}")

    print()
    print("== general solitary family check (c_x=0, rho_end=1, k_phi=1/2) ==")
    # Closed-form Theta_s(c_x) for REF-D: confirm d2/dc_x2 = 2 exactly.
    cx = sp.Symbol('c_x')
    rho = sp.Symbol('rho', positive=True)
    rho0, kphi = sp.Integer(1), sp.Rational(1, 2)
    mu_phi0 = cx * rho0 + 2 * rho0 * kphi
    om0 = cx * kphi + kphi**2 + rho0
    nu = (mu_phi0 - cx * rho) / (2 * rho)
    Wr = (-(2 * rho)**2 / 8 - rho * nu**2 + om0 * rho + mu_phi0 * nu
          - cx * rho * nu)
    mu_x0 = Wr.subs(rho, rho0)
    f = sp.simplify(mu_x0 - Wr)
    print("mu_x0 - Wrho =", sp.factor(f))


if __name__ == '__main__':
    main()

#!/usr/bin/env python3
"""Independent reference computations for the test fixtures.

Everything here is computed with mpmath adaptive quadrature / root finding at
50-digit working precision, independent of the C++ code paths (mpmath's
adaptive tanh-sinh / Gauss-Legendre vs the library's fixed-order rules, mpmath
root polishing vs the library's bisection+Newton, exact-formula cross-checks
where available). Run and paste the printed values into tests/fixtures.hpp.

Model family: kappa, W polynomials in alpha = |U|^2.
  REF   : kappa = 1, W(alpha) = -alpha^2/8   (focusing cubic)
  REF-D : kappa = 1, W(alpha) = +alpha^2/8   (defocusing cubic)

Effective potential (nu eliminated at its critical value):
  nu(rho)    = (mu_phi - c_x rho) / (2 rho kappa(2 rho))
  Wrho(rho)  = -W(2 rho) - kappa(2 rho) rho nu^2 + omega_phi rho
               + mu_phi nu - c_x rho nu
First integral: kappa(2 rho)/(4 rho) (drho/dx)^2 + Wrho(rho) = mu_x.

All well integrals int g(rho)/sqrt(f(rho)) drho with f vanishing simply at
both ends are computed after factoring f(rho) = (rho-a)(b-rho) h(rho) and
substituting rho = a + (b-a) s^2 (2-s^2)... no: rho = a + (b-a) u with
u = sin^2 t, which turns the integrand into a smooth function of t.
"""

import mpmath as mp

mp.mp.dps = 50


def make_model(kcoef, wcoef):
    kappa = lambda a: mp.polyval(list(reversed(kcoef)), a)
    W = lambda a: mp.polyval(list(reversed(wcoef)), a)
    return kappa, W


def wrho(kappa, W, rho, c_x, om, mu_phi):
    nu = (mu_phi - c_x * rho) / (2 * rho * kappa(2 * rho))
    return (-W(2 * rho) - kappa(2 * rho) * rho * nu**2 + om * rho
            + mu_phi * nu - c_x * rho * nu)


def nu_of(kappa, rho, c_x, mu_phi):
    return (mu_phi - c_x * rho) / (2 * rho * kappa(2 * rho))


def well_roots(kappa, W, p, lo, hi, n=600):
    """All simple roots of mu_x - Wrho in [lo, hi], polished to dps precision."""
    mu_x, c_x, om, mu_phi = p
    f = lambda r: mu_x - wrho(kappa, W, r, c_x, om, mu_phi)
    xs = [lo + (hi - lo) * i / n for i in range(n + 1)]
    roots = []
    for a, b in zip(xs, xs[1:]):
        if f(a) * f(b) < 0:
            roots.append(mp.findroot(f, (a, b), solver='anderson',
                                     tol=mp.mpf('1e-30')))
    return roots


def well_quad(g, f, a, b):
    """int_a^b g(r)/sqrt(f(r)) dr, f = (r-a)(b-r) h(r), h smooth > 0.
    Substitution r = a + (b-a) sin^2 t gives
    2 int_0^{pi/2} g(r(t)) / sqrt(h(r(t))) dt."""
    d = b - a

    def h(r):
        return f(r) / ((r - a) * (b - r))

    def integrand(t):
        s = mp.sin(t)
        r = a + d * s * s
        if r <= a:
            r = a + d * mp.mpf('1e-30')
        if r >= b:
            r = b - d * mp.mpf('1e-30')
        return g(r) / mp.sqrt(h(r))

    return 2 * mp.quad(integrand, [0, mp.pi / 2])


def profile_integrals(kappa, W, p, rmin, rmax):
    """X_x, Theta, grad Theta, averages, sigma_1..3 by rho-quadrature of the
    first-integral relations (two half-periods)."""
    mu_x, c_x, om, mu_phi = p
    f = lambda r: mu_x - wrho(kappa, W, r, c_x, om, mu_phi)
    nu = lambda r: nu_of(kappa, r, c_x, mu_phi)
    K = lambda r: kappa(2 * r)

    def iq(g):
        return well_quad(g, f, rmin, rmax)

    # dx/drho = sqrt(kappa/(4 rho f));   dTheta-type weight sqrt(kappa/rho)
    Xx = 2 * iq(lambda r: mp.sqrt(K(r) / (4 * r)))
    Theta = 2 * mp.quad(lambda t: _theta_integrand(t, f, K, rmin, rmax),
                        [0, mp.pi / 2])
    # d#Theta = int d#(mu_x - Wrho)/sqrt(f) sqrt(kappa/rho); envelope in nu:
    #   d_mu_x = 1, d_c_x = rho nu, d_om = -rho, d_mu_phi = -nu
    g_mu_x = iq(lambda r: mp.sqrt(K(r) / r))
    g_c_x = iq(lambda r: r * nu(r) * mp.sqrt(K(r) / r))
    g_om = iq(lambda r: -r * mp.sqrt(K(r) / r))
    g_mu_phi = iq(lambda r: -nu(r) * mp.sqrt(K(r) / r))
    int_rho = 2 * iq(lambda r: r * mp.sqrt(K(r) / (4 * r)))
    int_rho_nu = 2 * iq(lambda r: r * nu(r) * mp.sqrt(K(r) / (4 * r)))
    xi_phi = 2 * iq(lambda r: nu(r) * mp.sqrt(K(r) / (4 * r)))
    s1 = 2 * iq(lambda r: K(r) * 2 * r * mp.sqrt(K(r) / (4 * r)))
    s2 = 2 * iq(lambda r: K(r) * 2 * r * nu(r) * mp.sqrt(K(r) / (4 * r)))
    s3a = 2 * iq(lambda r: K(r) * 2 * r * nu(r)**2 * mp.sqrt(K(r) / (4 * r)))
    # kappa (rho')^2/(2rho) dx = 2 f dx
    s3b = 2 * iq(lambda r: 2 * f(r) * mp.sqrt(K(r) / (4 * r)))
    return dict(Xx=Xx, Theta=Theta,
                grad=[g_mu_x, g_c_x, g_om, g_mu_phi],
                int_rho=int_rho, int_rho_nu=int_rho_nu, xi_phi=xi_phi,
                sigma=[s1, s2, s3a + s3b])


def _theta_integrand(t, f, K, a, b):
    # Theta = 2 int sqrt(f) sqrt(K/r) dr, smooth after the same substitution
    d = b - a
    s = mp.sin(t)
    r = a + d * s * s
    if r <= a:
        r = a + d * mp.mpf('1e-30')
    if r >= b:
        r = b - d * mp.mpf('1e-30')
    h = f(r) / ((r - a) * (b - r))
    # dr = 2 d sin t cos t dt; sqrt(f) = sin t cos t d sqrt(h)
    return 2 * d * d * s * s * (1 - s * s) * mp.sqrt(h) * mp.sqrt(K(r) / r)


def action_and_grad(kappa, W, p, lo, hi):
    roots = well_roots(kappa, W, p, lo, hi)
    rmin, rmax = roots[0], roots[1]
    return profile_integrals(kappa, W, p, rmin, rmax)


def hess_theta(kappa, W, p, lo, hi, h=mp.mpf('1e-10')):
    H = mp.zeros(4)
    for j in range(4):
        pp = list(p); pm = list(p)
        pp[j] += h; pm[j] -= h
        gp = action_and_grad(kappa, W, pp, lo, hi)['grad']
        gm = action_and_grad(kappa, W, pm, lo, hi)['grad']
        for i in range(4):
            H[i, j] = (gp[i] - gm[i]) / (2 * h)
    return (H + H.T) / 2


def fmt(x, n=18):
    return mp.nstr(mp.re(x) if isinstance(x, mp.mpc) else x, n)


def show_matrix(H):
    for i in range(H.rows):
        print("  ", [fmt(H[i, j]) for j in range(H.cols)])


def pencil_speeds(H, Xx):
    A0 = mp.diag([1, 1, -1, -1])
    B0 = mp.matrix([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    Mp = ((A0 * H) / Xx) ** -1 * B0
    evs, _ = mp.eig(Mp)
    return evs


def main():
    kR, wR = make_model([1], [0, 0, mp.mpf(-1) / 8])    # REF
    kD, wD = make_model([1], [0, 0, mp.mpf(1) / 8])     # REF-D

    print("== REF wave (mu_x=-3/8, c_x=0, om=-1, mu_phi=0) ==")
    p = [mp.mpf(-3) / 8, 0, -1, 0]
    tp = well_roots(kR, wR, p, mp.mpf('0.05'), 3)
    print("turning points:", [fmt(t) for t in tp])
    d = profile_integrals(kR, wR, p, tp[0], tp[1])
    print("X_x      =", fmt(d['Xx']))
    print("Theta    =", fmt(d['Theta']))
    print("grad     =", [fmt(g) for g in d['grad']])
    print("int rho  =", fmt(d['int_rho']), " m_bar =", fmt(d['int_rho'] / d['Xx']))
    print("xi_phi   =", fmt(d['xi_phi']))
    print("sigma    =", [fmt(s) for s in d['sigma']])
    H = hess_theta(kR, wR, p, mp.mpf('0.05'), 3)
    print("HessTheta:")
    show_matrix(H)
    print("det Hess =", fmt(mp.det(H)))
    ev = mp.eigsy(H.apply(mp.re), eigvals_only=True)
    print("eigs     =", [fmt(e) for e in ev])
    print("speeds   =", [fmt(e) + '+' + fmt(mp.im(e)) + 'j'
                         for e in pencil_speeds(H.apply(mp.re), d['Xx'])])

    print()
    print("== REF small-amplitude wave (mu_x=-1/2+1e-3) ==")
    p2 = [mp.mpf(-1) / 2 + mp.mpf('1e-3'), 0, -1, 0]
    tp2 = well_roots(kR, wR, p2, mp.mpf('0.05'), 3)
    print("turning points:", [fmt(t) for t in tp2])
    d2 = profile_integrals(kR, wR, p2, tp2[0], tp2[1])
    print("X_x =", fmt(d2['Xx']), " (X0 = pi sqrt2 =", fmt(mp.pi * mp.sqrt(2)), ")")
    H2 = hess_theta(kR, wR, p2, mp.mpf('0.05'), 3, h=mp.mpf('1e-11'))
    print("HessTheta:")
    show_matrix(H2)
    print("det =", fmt(mp.det(H2)))
    ev2 = mp.eigsy(H2.apply(mp.re), eigvals_only=True)
    print("eigs =", [fmt(e) for e in ev2])
    print("speeds =", [fmt(e) + '+' + fmt(mp.im(e)) + 'j'
                       for e in pencil_speeds(H2.apply(mp.re), d2['Xx'])])

    print()
    print("== REF-D generic well (mu_x=0.99, c_x=0, om=5/4, mu_phi=1) ==")
    pD = [mp.mpf('0.99'), 0, mp.mpf(5) / 4, 1]
    tpD = well_roots(kD, wD, pD, mp.mpf('0.05'), 3)
    print("roots of mu_x - Wrho:", [fmt(t) for t in tpD])
    dD = profile_integrals(kD, wD, pD, tpD[0], tpD[1])
    print("X_x    =", fmt(dD['Xx']))
    print("Theta  =", fmt(dD['Theta']))
    print("xi_phi =", fmt(dD['xi_phi']))
    print("grad   =", [fmt(g) for g in dD['grad']])
    print("m_bar  =", fmt(dD['int_rho'] / dD['Xx']),
          " q_bar =", fmt(dD['int_rho_nu'] / dD['Xx']))
    print("sigma  =", [fmt(s) for s in dD['sigma']])

    print()
    print("== REF-D harmonic member (c_x=0, rho0=1, kphi0=1): mu_x=5/2+1e-3 ==")
    pH = [mp.mpf(5) / 2 + mp.mpf('1e-3'), 0, 2, 2]
    tpH = well_roots(kD, wD, pH, mp.mpf('0.5'), mp.mpf('1.55'))
    print("turning points:", [fmt(t) for t in tpH])
    dH = profile_integrals(kD, wD, pH, tpH[0], tpH[1])
    print("X_x =", fmt(dH['Xx']), " (X0 = pi sqrt2)")
    HH = hess_theta(kD, wD, pH, mp.mpf('0.5'), mp.mpf('1.55'), h=mp.mpf('1e-11'))
    print("HessTheta:")
    show_matrix(HH)
    evH = mp.eigsy(HH.apply(mp.re), eigvals_only=True)
    print("eigs =", [fmt(e) for e in evH])
    print("speeds =", [fmt(e) + '+' + fmt(mp.im(e)) + 'j'
                       for e in pencil_speeds(HH.apply(mp.re), dH['Xx'])])

    print()
    print("== REF-D solitary fixture (c_x=0, rho_end=1, k_phi=1/2) ==")
    # om0 = 5/4, mu_phi0 = 1, mu_x0 = 1, rho_s = 1/2 (exact)
    f0 = lambda r: 1 - wrho(kD, wD, r, 0, mp.mpf(5) / 4, 1)
    # f0 = (r-1)^2 (r-1/2) / (2r); double root at right end. Quadrature weight
    # sqrt(f0) vanishes linearly at 1, sqrt at 1/2: substitute at the left end.
    th_s = 2 * mp.quad(
        lambda t: _soliton_integrand(t, f0, lambda r: 1, mp.mpf(1) / 2, 1),
        [0, mp.pi / 2])
    print("Theta_s =", fmt(th_s))

    def theta_s_of_cx(cx):
        cx = mp.mpf(cx)
        rho0 = mp.mpf(1); kphi = mp.mpf(1) / 2
        mu_phi0 = cx * rho0 + 2 * rho0 * kphi
        om0 = cx * kphi + kphi**2 + rho0  # + 2 W'(2 rho0) = rho0 for REF-D
        g = lambda r: (wrho(kD, wD, rho0, cx, om0, mu_phi0)
                       - wrho(kD, wD, r, cx, om0, mu_phi0))
        dW = lambda r: mp.diff(
            lambda rr: wrho(kD, wD, rr, cx, om0, mu_phi0), r)
        center = mp.findroot(dW, mp.mpf('0.64'))
        # simple root of g left of the center
        lo = mp.mpf('0.05')
        a = None
        n = 400
        xs = [lo + (center - lo) * i / n for i in range(n + 1)]
        for aa, bb in zip(xs, xs[1:]):
            if g(aa) * g(bb) < 0:
                a = mp.findroot(g, (aa, bb), solver='anderson',
                                tol=mp.mpf('1e-30'))
        ths = 2 * mp.quad(
            lambda t: _soliton_integrand(t, g, lambda r: 1, a, rho0),
            [0, mp.pi / 2])
        return ths, a

    t0, rs0 = theta_s_of_cx(0)
    print("Theta_s(0) recheck =", fmt(t0), " rho_s =", fmt(rs0))
    h = mp.mpf('1e-8')
    tp_, _ = theta_s_of_cx(h)
    tm_, _ = theta_s_of_cx(-h)
    t2p, _ = theta_s_of_cx(2 * h)
    t2m, _ = theta_s_of_cx(-2 * h)
    d1 = (tp_ - tm_) / (2 * h)
    d2c = (tp_ - 2 * t0 + tm_) / h**2
    d2c4 = (-t2p + 16 * tp_ - 30 * t0 + 16 * tm_ - t2m) / (12 * h**2)
    print("d(Theta_s)/dc_x =", fmt(d1))
    print("vk_index d2(Theta_s)/dc_x2 =", fmt(d2c), " (4th-order:", fmt(d2c4), ")")

    print()
    print("== REF-D large-period member: mu_x = 1 - 1e-4, (0, 5/4, 1) ==")
    pL = [1 - mp.mpf('1e-4'), 0, mp.mpf(5) / 4, 1]
    tpL = well_roots(kD, wD, pL, mp.mpf('0.05'), 3)
    print("roots:", [fmt(t) for t in tpL])
    rmin, rmax, rdual = tpL[0], tpL[1], tpL[2]
    print("epsilon = (rdual - rmax)/(rmax - rmin) =",
          fmt((rdual - rmax) / (rmax - rmin)))
    dL = profile_integrals(kD, wD, pL, rmin, rmax)
    print("X_x =", fmt(dL['Xx']))
    print("Theta =", fmt(dL['Theta']))
    HL = hess_theta(kD, wD, pL, mp.mpf('0.05'), 3, h=mp.mpf('1e-11'))
    print("HessTheta:")
    show_matrix(HL)
    evL = mp.eigsy(HL.apply(mp.re), eigvals_only=True)
    print("eigs =", [fmt(e) for e in evL])
    print("det  =", fmt(mp.det(HL)))
    print("speeds =", [fmt(e) + '+' + fmt(mp.im(e)) + 'j'
                       for e in pencil_speeds(HL.apply(mp.re), dL['Xx'])])


def _soliton_integrand(t, f, K, a, b):
    # 2 int_a^b sqrt(f) sqrt(K/r) dr with f simple zero at a, double at b:
    # r = a + (b-a) sin^2 t; sqrt(f) = sin t sqrt((b-r) h); dr = 2d sin t cos t
    d = b - a
    s = mp.sin(t)
    r = a + d * s * s
    if r <= a:
        r = a + d * mp.mpf('1e-30')
    if r >= b:
        r = b - d * mp.mpf('1e-30')
    h = f(r) / ((r - a) * (b - r) ** 2)
    return (2 * d * s * s * mp.cos(t) * (b - r)
            * mp.sqrt(d * h) * mp.sqrt(K(r) / r))


if __name__ == '__main__':
    main()

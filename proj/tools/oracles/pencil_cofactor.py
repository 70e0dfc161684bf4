#!/usr/bin/env python3
"""Independent oracle for the modulation pencil coefficient extractor.

Expands P(lam, z, zeta) = det(lam^2*A0*H - lam*z*B0 + zeta^2*C0) by direct
symbolic cofactor expansion and prints the exact coefficient table
delta_(m,n,p), where

    P = sum_{m+n+p=4, p<=m} delta_(m,n,p) * lam^(4+m-p) * z^n * zeta^(2p).

Run on a random-looking integer symmetric H and integer sigma so every
coefficient is an exact integer.  Also verifies structural facts the C++
extractor relies on:
  * P is divisible by lam^4 (coefficients below lam^4 vanish identically),
  * delta_(0,4,0) = 1,
  * only even powers of zeta appear and (m-p)+n parity is automatic.

Finally repeats the expansion with the high-precision REF fixture Hessian
and sigma values (30 significant digits) so the end-to-end C++ pipeline can
be cross-checked on a genuine wave.
"""

import sympy as sp


def pencil_poly(H, s1, s2, s3):
    lam, z, zeta = sp.symbols("lam z zeta")
    A0 = sp.diag(1, 1, -1, -1)
    B0 = sp.Matrix([[0, 1, 0, 0],
                    [1, 0, 0, 0],
                    [0, 0, 0, 1],
                    [0, 0, 1, 0]])
    C0 = sp.Matrix([[0, 0, 0, 0],
                    [0, -s3, s2, 0],
                    [0, -s2, s1, 0],
                    [0, 0, 0, 0]])
    M = lam**2 * A0 * H - lam * z * B0 + zeta**2 * C0
    P = sp.expand(M.det(method="berkowitz"))
    return P, (lam, z, zeta)


def delta_table(P, syms):
    lam, z, zeta = syms
    poly = sp.Poly(P, lam, z, zeta)
    table = {}
    low = {}
    for (i, j, k), c in poly.terms():
        # monomial lam^i z^j zeta^k ; k even; map to (m,n,p)
        assert k % 2 == 0, (i, j, k)
        p = k // 2
        n = j
        m = 4 - n - p
        if i < 4 + m - p or m < 0 or p > m:
            low[(i, j, k)] = c
            continue
        assert i == 4 + m - p, (i, j, k)
        table[(m, n, p)] = c
    return table, low


def report(name, H, s1, s2, s3):
    P, syms = pencil_poly(H, s1, s2, s3)
    table, low = delta_table(P, syms)
    print(f"== {name} ==")
    print(f"   spurious (below lam^4) coefficients: {low if low else 'none'}")
    for key in sorted(table):
        print(f"   delta{key} = {table[key]}")
    print()
    return table


def main():
    sp.init_printing(use_unicode=False)

    # integer fixture: arbitrary symmetric H, arbitrary sigma
    H = sp.Matrix([[2, -1, 3, 0],
                   [-1, 4, -2, 1],
                   [3, -2, -5, 2],
                   [0, 1, 2, -3]])
    tab = report("integer fixture  H as listed, sigma=(2,-3,5)", H, 2, -3, 5)
    assert tab[(0, 4, 0)] == 1

    # symbolic sanity: delta_(0,4,0) = det(-B0)/z^4 = 1 for any H
    a, b, c, d, e, f, g, h, i, j = sp.symbols("a b c d e f g h i j")
    Hs = sp.Matrix([[a, b, c, d],
                    [b, e, f, g],
                    [c, f, h, i],
                    [d, g, i, j]])
    P, syms = pencil_poly(Hs, *sp.symbols("q1 q2 q3"))
    tabs, low = delta_table(P, syms)
    assert not low, "lam^4 divisibility failed for generic symmetric H"
    assert tabs[(0, 4, 0)] == 1
    print("generic symmetric H: P divisible by lam^4, delta(0,4,0)=1  [ok]")
    print()

    # REF fixture (frozen from reference_quadrature.py, 18 digits)
    ref_hess = [
        ["2.27897608813891420", "0", "0.633608102189353917", "0"],
        ["0", "-2.18443814274620119", "0", "2.34284016829353972"],
        ["0.633608102189353917", "0", "1.70923206610418603", "0"],
        ["0", "2.34284016829353972", "0", "-2.91258419032826825"],
    ]
    Hr = sp.Matrix([[sp.Rational(x) for x in row] for row in ref_hess])
    s1 = sp.Rational("8.73775257098480474")
    s2 = sp.Rational("0")
    s3 = sp.Rational("0.569744022034728529")
    P, syms = pencil_poly(Hr, s1, s2, s3)
    table, low = delta_table(P, syms)
    print("== REF fixture (exact rational arithmetic on frozen inputs) ==")
    maxlow = max((abs(sp.Float(v, 30)) for v in low.values()), default=0)
    print(f"   max |spurious coefficient| = {maxlow}")
    for key in sorted(table):
        print(f"   delta{key} = {sp.Float(table[key], 25)}")


if __name__ == "__main__":
    main()

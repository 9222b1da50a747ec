"""Independent reference values for the C++ unit tests.

Everything here is computed with mpmath/sympy/numpy directly from the model
formulas, without touching the C++ implementation. Re-run to regenerate the
constants frozen in tests/*.cpp.
"""
import mpmath as mp
import numpy as np
import sympy as sp

mp.mp.dps = 40


def single(k, gr, gl, k0):
    k, k0 = mp.mpf(k), mp.mpf(k0)
    return gr / 2 * mp.cot((k0 - k) / 2) + gl / 2 * mp.cot((k0 + k) / 2)


print("single(0; 0.5,0.5,1.2) =", mp.nstr(single(0, 0.5, 0.5, 1.2), 20))
print("pair(0,0)              =", mp.nstr(2 * single(0, 0.5, 0.5, 1.2), 20))
print("pair(0.3,0.8; GR=1)    =", mp.nstr(single(0.7, 1, 0, 1.2) + single(-0.1, 1, 0, 1.2), 20))

# quartic coefficients by clearing both denominators symbolically
z, w, K, k0, GR, GL = sp.symbols("z w K k0 GR GL")
dp = 1 + z**2 - 2 * z * sp.cos(k0 + K)
dm = 1 + z**2 - 2 * z * sp.cos(k0 - K)
cleared = sp.expand(w * dp * dm - 2 * z * GL * sp.sin(k0 + K) * dm - 2 * z * GR * sp.sin(k0 - K) * dp)
poly = sp.Poly(cleared, z)
subs = {K: sp.Rational(1, 5), w: 1, k0: sp.Rational(6, 5), GR: sp.Rational(1, 2), GL: sp.Rational(1, 2)}
print("quartic c4..c0 (K=0.2, w=1, k0=1.2, chi=0.5):",
      [sp.N(c.subs(subs), 20) for c in poly.all_coeffs()])

# chiral bound state, GR = 0
zc = mp.cos(mp.mpf("1.5"))
print("chiral K=0.3 z =", mp.nstr(zc, 20), " omega =", mp.nstr(2 * mp.cot(mp.mpf("1.5")), 20))
print("K=0 special z =", mp.nstr(mp.cos(mp.mpf("1.2")), 20), " omega =", mp.nstr(2 * mp.cot(mp.mpf("1.2")), 20))

# truncated Hamiltonian, element-by-element
def hel(d, dp_, Kv, gr, gl, k0v):
    tot = 0
    for e in (1, -1):
        n = abs(d + e * dp_)
        tot += -1j * gr * mp.expj((k0v - Kv) * n) - 1j * gl * mp.expj((k0v + Kv) * n)
    return tot

Kv, k0v = mp.mpf("0.2"), mp.mpf("1.2")
print("lattice N=6 row 1:")
for dp_ in range(1, 7):
    v = hel(1, dp_, Kv, 0.5, 0.5, k0v)
    print("  (1,%d) %s %s" % (dp_, mp.nstr(v.real, 18), mp.nstr(v.imag, 18)))
print("lattice N=6 (4,6):", mp.nstr(hel(4, 6, Kv, 0.5, 0.5, k0v), 18))
print("lattice N=6 (5,5):", mp.nstr(hel(5, 5, Kv, 0.5, 0.5, k0v), 18))


# pair density of states at K=0.2, chi=0.5, k0=1.2: periodic q grid over [-2pi, 2pi)
def dos(Kd, gr, gl, k0d, grid, bins, lo, hi):
    vals = []
    for j in range(grid):
        q = -2 * np.pi + 4 * np.pi * j / grid
        ks = [Kd + q / 2, Kd - q / 2]
        tot = 0.0
        ok = True
        for k in ks:
            k = np.remainder(k + np.pi, 2 * np.pi) - np.pi
            for pole, g in ((k0d, gr), (-k0d, gl)):
                dist = abs(np.remainder(k - pole + np.pi, 2 * np.pi) - np.pi)
                if g > 0 and dist < 1e-9:
                    ok = False
            tot += gr / 2 / np.tan((k0d - k) / 2) + gl / 2 / np.tan((k0d + k) / 2)
        if ok and np.isfinite(tot):
            vals.append(tot)
    vals = np.array(vals)
    inside = vals[(vals >= lo) & (vals < hi)]
    counts, _ = np.histogram(inside, bins=bins, range=(lo, hi))
    return counts / counts.sum()

print("dos K=0.2 (grid 4001, 20 bins, [-5,5]):", ", ".join("%.12g" % c for c in dos(0.2, 0.5, 0.5, 1.2, 4001, 20, -5.0, 5.0)))


# bound state at K=1.5, chi=0.5 via numpy.roots on the cleared quartic + brentq on D
def coeffs(Kd, wd, gr, gl, k0d):
    spl, smi = np.sin(k0d + Kd), np.sin(k0d - Kd)
    cpl, cmi = np.cos(k0d + Kd), np.cos(k0d - Kd)
    c3 = -2 * (wd * (cpl + cmi) + gl * spl + gr * smi)
    c2 = 2 * (wd * (1 + 2 * cpl * cmi) + 2 * (gl * spl * cmi + gr * smi * cpl))
    return [wd, c3, c2, c3, wd]


def gfun(zv, Kd, gr, gl, k0d):
    cpl, cmi = np.cos(k0d + Kd), np.cos(k0d - Kd)
    return (2 * zv * gl * (zv - cpl) / (1 + zv * zv - 2 * zv * cpl),
            2 * zv * gr * (zv - cmi) / (1 + zv * zv - 2 * zv * cmi))


def det(wd, Kd):
    r = np.roots(coeffs(Kd, wd, 0.5, 0.5, 1.2))
    z1, z2 = sorted([x.real for x in r if abs(x) < 1])
    gp1, gm1 = gfun(z1, Kd, 0.5, 0.5, 1.2)
    gp2, gm2 = gfun(z2, Kd, 0.5, 0.5, 1.2)
    return gm1 * gp2 - gp1 * gm2, z1, z2

from scipy.optimize import brentq
wb = brentq(lambda x: det(x, 1.5)[0], -1.96, -1.90, xtol=1e-15)
print("bound K=1.5: omega=%.15g z1=%.15g z2=%.15g" % (wb, det(wb, 1.5)[1], det(wb, 1.5)[2]))

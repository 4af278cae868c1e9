"""Frozen reference values for specfun tests, computed with mpmath at 30 digits."""
import mpmath as mp

mp.mp.dps = 30

nus = [-3.0, -2.5, -1.25, -0.5, 0.0, 0.3, 0.5, 1.0, 1.5, 2.0, 2.75, 3.0]
ss = [1e-6, 1e-3, 0.1, 0.9, 1.0, 2.0, 2.5, 7.0, 20.0, 50.0]

print("// nu, s, K_nu(s), I_nu(s)")
for nu in nus:
    for s in ss:
        k = mp.besselk(nu, s)
        i = mp.besseli(nu, s)
        print("{%s, %s, %s, %s}," % (mp.nstr(nu, 17), mp.nstr(s, 17),
                                     mp.nstr(k, 17), mp.nstr(i, 17)))

print("// gamma")
for x in [-4.5, -0.5, 0.1, 0.5, 1.0, 2.5, 7.3, 29.5]:
    print("{%s, %s}," % (x, mp.nstr(mp.gamma(x), 17)))

print("// d_gamma")
for g in [0.25, 0.5, 0.75]:
    print(g, mp.nstr(2**(2*g-1)*mp.gamma(g)/mp.gamma(1-g), 17))

print("// 1/Gamma(1+x) taylor")
c = mp.taylor(lambda x: 1/mp.gamma(1+x), 0, 24)
for v in c:
    print(mp.nstr(v, 20))

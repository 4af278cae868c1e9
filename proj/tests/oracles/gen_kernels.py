"""Frozen reference values for the kernel, operator and manifold tests (mpmath, 30 digits).

Routes deliberately differ from the library's:
  * H^3 heat kernel: (4 pi t)^{-3/2} rho/sinh(rho) exp(-t - rho^2/4t).
  * H^2 heat kernel: McKean's integral
      sqrt(2) e^{-t/4} (4 pi t)^{-3/2} int_rho^inf s e^{-s^2/4t} / sqrt(cosh s - cosh rho) ds.
  * K_gamma on H^3: G'(rho) / (2 pi sinh rho) with G the 1-D kernel of (1 - d^2)^gamma,
      G(x) = (x/2)^{-gamma-1/2} K_{gamma+1/2}(x) / (sqrt(pi) Gamma(-gamma)),
    continued from gamma < 0, differentiated analytically by mpmath.
  * gamma = -0.75: the convergent spectral integral, by oscillatory quadrature.
  * spherical function on H^2: -lambda (pi/sqrt 2) tanh(pi lambda) P_{-1/2 + i lambda}(cosh rho)
    (Mehler-Fock).
  * Poisson kernel on H^3: oscillatory quadrature of lambda sin(lambda rho) phi(y sqrt(lambda^2+1)).
Run: python3 gen_kernels.py  (writes the *_table.inc files next to this script)
"""
import os

import mpmath as mp

mp.mp.dps = 30


def heat_h3(t, r):
    if r == 0:
        return (4 * mp.pi * t) ** -1.5 * mp.e ** (-t)
    return (4 * mp.pi * t) ** -1.5 * r / mp.sinh(r) * mp.exp(-t - r * r / (4 * t))


def heat_h2(t, r):
    # s = r + v^2 and cosh s - cosh r = 2 sinh((s+r)/2) sinh(v^2/2) remove the endpoint singularity
    def g(v):
        s = r + v * v
        if v == 0:
            return 2 * s * mp.exp(-s * s / (4 * t)) / mp.sqrt(mp.sinh(s)) if r > 0 else mp.mpf(0)
        w = 2 * v / mp.sqrt(2 * mp.sinh(s / 2 + r / 2) * mp.sinh(v * v / 2))
        return w * s * mp.exp(-s * s / (4 * t))
    val = mp.quad(g, [0, 0.5, 1, 2, 4, mp.inf])
    return mp.sqrt(2) * mp.exp(-t / 4) * (4 * mp.pi * t) ** -1.5 * val


def frac_h3(gamma, r):
    mu = gamma + mp.mpf(1) / 2
    G = lambda x: (x / 2) ** (-mu) * mp.besselk(mu, x) / (mp.sqrt(mp.pi) * mp.gamma(-gamma))
    return mp.diff(G, r) / (2 * mp.pi * mp.sinh(r))


def frac_h3_direct(gamma, r):
    # C_3 int_R (l^2+1)^gamma (-l sin(l r)/sinh r) dl with C_3 = -1/(4 pi^2)
    c3 = -1 / (4 * mp.pi ** 2)
    val = mp.quadosc(lambda l: l * (l * l + 1) ** gamma * mp.sin(l * r), [0, mp.inf], omega=r)
    return c3 * (-2 * val / mp.sinh(r))


def phi(gamma, s):
    return 2 ** (1 - gamma) / mp.gamma(gamma) * s ** gamma * mp.besselk(gamma, s)


def poisson_h3(gamma, y, r):
    m = lambda l: phi(gamma, y * mp.sqrt(l * l + 1))
    if r == 0:
        val = mp.quad(lambda l: l * l * m(l), [0, 1, 10, mp.inf])
        return val / (2 * mp.pi ** 2)
    val = mp.quadosc(lambda l: l * mp.sin(l * r) * m(l), [0, mp.inf], omega=r)
    return val / (2 * mp.pi ** 2 * mp.sinh(r))


def spherical_h2(lam, r):
    p = mp.legenp(-mp.mpf(1) / 2 + 1j * lam, 0, mp.cosh(r))
    return -lam * mp.pi / mp.sqrt(2) * mp.tanh(mp.pi * lam) * mp.re(p)


def row(*xs):
    return "{" + ", ".join(mp.nstr(x, 17) for x in xs) + "},"


HERE = os.path.dirname(os.path.abspath(__file__))


def write(name, header, rows):
    with open(os.path.join(HERE, name), "w") as out:
        out.write("// " + header + "\n")
        for r in rows:
            out.write(row(*r) + "\n")


write("heat_h3_table.inc", "t, rho, p_t(rho) on H^3",
      [(t, r, heat_h3(mp.mpf(t), mp.mpf(r))) for t in [0.01, 0.1, 1.0, 10.0] for r in [0.0, 0.5, 1.0, 3.0]])
write("heat_h2_table.inc", "t, rho, p_t(rho) on H^2",
      [(t, r, heat_h2(mp.mpf(t), mp.mpf(r))) for t in [0.5, 1.0, 3.0] for r in [0.0, 0.5, 2.0]])
write("frac_h3_table.inc", "gamma, rho, K_gamma(rho) on H^3",
      [(g, r, frac_h3(mp.mpf(g), mp.mpf(r))) for g in [0.25, 0.5, 0.75] for r in [0.1, 0.5, 1.0, 2.0, 5.0]] +
      [(-0.75, r, frac_h3_direct(mp.mpf(-0.75), mp.mpf(r))) for r in [0.5, 1.0, 2.0]])
write("poisson_h3_table.inc", "gamma, y, rho, P_y(rho) on H^3",
      [(g, y, r, poisson_h3(mp.mpf(g), mp.mpf(y), mp.mpf(r)))
       for g in [0.5, 0.25] for y in [0.5, 1.0] for r in [0.0, 1.0, 2.0]])
write("spherical_h2_table.inc", "lambda, rho, k_lambda(rho) on H^2",
      [(l, r, spherical_h2(mp.mpf(l), mp.mpf(r))) for l in [0.5, 1.0, 2.0] for r in [0.5, 1.0, 3.0]])

"""Pinned two-fold ordered coupling integral by fixed-grid quadrature.

Evaluates, in 50-digit arithmetic with a fixed 64-node Gauss-Legendre
grid per nesting level (nodes by Newton iteration on P_n, no adaptive
machinery),

    I_2 = (kappa/mu)^2 s^{2 delta} *
          int_0^1 dsig1 sig1^{delta-1} e^{-i c sig1}
          int_0^{sig1} dsig2 sig2^{delta-1} e^{+i c sig2},
    c = 2 k3 s / mu,

for the stiff background mu = 1, nu = 1/2 (delta = 1/2), k = (1, 0, 1),
s = 0.5, t_a = 0.  The endpoint weight is removed exactly by
sig = u^2 before quadrature.
"""
import mpmath as mp

mp.mp.dps = 50


def gauss_legendre(n):
    nodes, weights = [], []
    for i in range(n):
        x = mp.cos(mp.pi * (i + 0.75) / (n + 0.5))
        for _ in range(60):
            p0, p1 = mp.mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < mp.mpf(10) ** (-mp.mp.dps + 2):
                break
        nodes.append(x)
        weights.append(2 / ((1 - x * x) * dp * dp))
    return nodes, weights


def fixed_quad(f, a, b, nodes, weights):
    mid, half = (a + b) / 2, (b - a) / 2
    return half * mp.fsum(w * f(mid + half * x) for x, w in zip(nodes, weights))


def ordered_i2(kappa, mu, delta, s, c, n=64):
    nodes, weights = gauss_legendre(n)
    assert delta == mp.mpf(1) / 2  # sig = u^2 removes the weight exactly

    def inner(v):
        return fixed_quad(lambda u: 2 * mp.e ** (1j * c * u * u), mp.mpf(0), v, nodes, weights)

    outer = fixed_quad(lambda v: 2 * mp.e ** (-1j * c * v * v) * inner(v),
                       mp.mpf(0), mp.mpf(1), nodes, weights)
    return (kappa / mu) ** 2 * s ** (2 * delta) * outer


if __name__ == "__main__":
    kappa, mu, s = mp.mpf(1), mp.mpf(1), mp.mpf("0.5")
    delta = mp.mpf(1) / 2
    c = 2 * s / mu  # k3 = 1
    v64 = ordered_i2(kappa, mu, delta, s, c, n=64)
    v96 = ordered_i2(kappa, mu, delta, s, c, n=96)
    assert mp.almosteq(v64, v96, rel_eps=mp.mpf(10) ** -30)
    print(f"I2(mu=1, nu=1/2, k=(1,0,1), s=0.5, t_a=0) = {mp.nstr(v64, 25)}")

"""Pinned Bessel-J values from the defining ascending series.

Sums (x/2)^order * sum_m (-1)^m (x/2)^{2m} / (m! Gamma(order+m+1)) in
50-digit arithmetic with explicit tail control; does not call a library
Bessel routine.
"""
import mpmath as mp

mp.mp.dps = 50


def bessel_j_series(order, x):
    order = mp.mpc(order)
    x = mp.mpf(x)
    pref = (x / 2) ** order
    term = 1 / mp.gamma(order + 1)
    total = term
    m = 0
    while True:
        m += 1
        term = term * (-(x / 2) ** 2) / (m * (order + m))
        total += term
        if abs(term) < mp.mpf(10) ** (-mp.mp.dps + 5) * max(abs(total), mp.mpf(1)) and m > 5:
            break
        if m > 2000:
            raise RuntimeError("series did not converge")
    return pref * total


POINTS = [
    (mp.mpc(0.5, 1.0), 1.0),
    (mp.mpc(0.3, -2.0), 7.5),
    (mp.mpc(0.5, 4.0), 30.0),
    (mp.mpc(-0.5, -1.5), 12.0),
]

if __name__ == "__main__":
    for order, x in POINTS:
        v = bessel_j_series(order, x)
        check = mp.besselj(order, x)
        assert mp.almosteq(v, check, rel_eps=mp.mpf(10) ** -35)
        print(f"J[{mp.nstr(order, 17)}]({x}) = {mp.nstr(v, 25)}")

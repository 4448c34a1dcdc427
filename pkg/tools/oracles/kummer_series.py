"""Pinned Kummer M(a,b,z) values from the defining series (50 digits)."""
import mpmath as mp

mp.mp.dps = 80


def kummer_series(a, b, z):
    a, b, z = mp.mpc(a), mp.mpc(b), mp.mpc(z)
    term = mp.mpc(1)
    total = mp.mpc(1)
    n = 0
    while True:
        term = term * (a + n) * z / ((b + n) * (n + 1))
        total += term
        n += 1
        if abs(term) < mp.mpf(10) ** (-mp.mp.dps + 5) * max(abs(total), mp.mpf(1)) and n > 5:
            break
        if n > 5000:
            raise RuntimeError("series did not converge")
    return total


POINTS = [
    (-0.25, 1.5, mp.mpc(0, 2)),
    (mp.mpc(0.5, 0.5), mp.mpc(1.25, -0.25), mp.mpc(-3, 4)),
    (mp.mpc(0.25, -1.0), 1.5, mp.mpc(0, 55)),
]

if __name__ == "__main__":
    for a, b, z in POINTS:
        v = kummer_series(a, b, z)
        check = mp.hyp1f1(a, b, z)
        assert mp.almosteq(v, check, rel_eps=mp.mpf(10) ** -35)
        print(f"M({mp.nstr(mp.mpc(a), 17)}, {mp.nstr(mp.mpc(b), 17)}, {mp.nstr(mp.mpc(z), 17)}) "
              f"= {mp.nstr(v, 25)}")

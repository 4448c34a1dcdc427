"""Pinned Whittaker W values via the Kummer connection formula (50 digits).

W_{kw,mw}(z) = G(-2mw)/G(1/2-mw-kw) M_{kw,mw}(z)
             + G(+2mw)/G(1/2+mw-kw) M_{kw,-mw}(z),
M_{kw,mw}(z) = e^{-z/2} z^{1/2+mw} M(1/2+mw-kw, 1+2mw, z),

independent of any library Whittaker routine (the kummer_series module
supplies M).  Cross-checked against mpmath.whitw at 1e-35.
"""
import mpmath as mp

from kummer_series import kummer_series

mp.mp.dps = 80


def whittaker_connection(kw, mw, z):
    kw, mw, z = mp.mpc(kw), mp.mpc(mw), mp.mpc(z)
    half = mp.mpf(1) / 2
    out = mp.mpc(0)
    for m_sign in (mw, -mw):
        c = mp.gamma(-2 * m_sign) / mp.gamma(half - m_sign - kw)
        out += c * mp.e ** (-z / 2) * z ** (half + m_sign) * kummer_series(
            half + m_sign - kw, 1 + 2 * m_sign, z)
    return out


POINTS = [
    (mp.mpc(-0.25, -0.5), 0.25, mp.mpc(0, 2)),
    (mp.mpc(0.75, -0.8), 0.25, mp.mpc(0, -12)),
    (mp.mpc(-0.25, -1.5), 0.25, mp.mpc(0, 40)),
]

if __name__ == "__main__":
    for kw, mw, z in POINTS:
        v = whittaker_connection(kw, mw, z)
        check = mp.whitw(kw, mw, z)
        assert mp.almosteq(v, check, rel_eps=mp.mpf(10) ** -35)
        print(f"W[{mp.nstr(mp.mpc(kw), 17)}; {mp.nstr(mp.mpc(mw), 17)}]({mp.nstr(mp.mpc(z), 17)}) "
              f"= {mp.nstr(v, 25)}")

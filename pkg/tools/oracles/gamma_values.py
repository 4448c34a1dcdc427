"""Pinned complex-gamma values (mpmath, 50 digits)."""
import mpmath as mp

mp.mp.dps = 50

POINTS = [
    mp.mpc(0.5, 3.0),
    mp.mpc(-2.5, 0.5),
    mp.mpc(10.0, -20.0),
    mp.mpc(0.5, 40.0),
    mp.mpc(0.0, 1.0),
]

if __name__ == "__main__":
    for z in POINTS:
        g = mp.gamma(z)
        print(f"gamma({mp.nstr(z, 17)}) = {mp.nstr(g, 25)}")

"""Arbitrary-precision reference for the four shuttling phase-error terms.

Run with `python3 phase_error_terms.py`; the printed values are frozen into
`tests/error_model.rs` as golden constants.
"""
from mpmath import mp, mpf, exp, log, pi

mp.dps = 50

HBAR = mpf("1.054571817e-34")
EV = mpf("1.602176634e-19")

l_c = mpf("100e-9")
t2_star = mpf("20e-6")
l_dot = mpf("20e-9")
e_vs0 = mpf("100e-6") * EV
d_bar = mpf("30e-9")
a_x = mpf("0.05") * pi * mpf("1e9")


def terms(v, l_s):
    v = mpf(v)
    l_s = mpf(l_s)
    t1 = 2 * l_c * l_s / (v * t2_star) ** 2
    t2 = mpf("1e-4") / v
    t3 = mpf("0.01") * mpf("0.5") * (HBAR * a_x * v) ** 2 / e_vs0**2 * exp((a_x * l_dot) ** 2 / 2)
    t4 = mpf("0.01") * (l_s / d_bar) * exp(-mpf("0.03") * log(10) * e_vs0 * l_dot / (HBAR * v))
    return t1, t2, t3, t4


if __name__ == "__main__":
    for v, l_s in [("10", "3e-6"), ("10", "5e-6"), ("4", "1e-6")]:
        ts = terms(v, l_s)
        print(f"v={v} L_s={l_s}")
        for i, t in enumerate(ts, 1):
            print(f"  T{i} = {mp.nstr(t, 20)}")
        print(f"  sum = {mp.nstr(sum(ts), 20)}")

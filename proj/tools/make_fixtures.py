#!/usr/bin/env python3
"""Regenerate the packaged example data in data/.

gain.csv: parametric gain of both seed quadratures versus pump power for a
135 mW threshold, 12 pump settings up to 23 mW, 1% multiplicative noise.
fp_response.csv: on/off resonance transmission and reflection of the
reference cavity probed through the coupler, 1% noise.
"""
import math
import pathlib

import numpy as np

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def gain(p, p_th):
    x = math.sqrt(p / p_th)
    d = (1 - p / p_th) ** 2
    return (1 + x) ** 2 / d, (1 - x) ** 2 / d


def airy(r_out, r_hr, loss_db_cm, length_mm, passes=2):
    a = 10 ** (-passes * loss_db_cm * length_mm / 10 / 20 / 2)
    r1, r2 = math.sqrt(r_out), math.sqrt(r_hr)
    t1, t2 = math.sqrt(1 - r_out), math.sqrt(1 - r_hr)
    out = {}
    for name, s in (("on", -1), ("off", 1)):
        den = (1 + s * r1 * r2 * a * a) ** 2
        out["t_" + name] = (t1 * t2 * a) ** 2 / den
        out["r_" + name] = (r1 + s * r2 * a * a) ** 2 / den
    return out


def main():
    rng = np.random.default_rng(1)
    rows = ["# synthetic parametric gain, threshold 135 mW, 1% noise",
            "pump_mw,g_plus,g_minus,g_plus_err,g_minus_err"]
    for p in np.linspace(23 / 12, 23, 12):
        gp, gm = gain(p, 135.0)
        gp_n = gp * (1 + 0.01 * rng.standard_normal())
        gm_n = gm * (1 + 0.01 * rng.standard_normal())
        rows.append(f"{p:.4f},{gp_n:.6f},{gm_n:.6f},{0.01 * gp:.6f},{0.01 * gm:.6f}")
    (DATA / "gain.csv").write_text("\n".join(rows) + "\n")

    resp = airy(0.77, 0.99, 0.13, 8.0)
    rows = ["# reference cavity probed through the coupler, 1% noise", "quantity,value,err"]
    for q in ("t_on", "t_off", "r_on", "r_off"):
        n = 0.01 * rng.standard_normal()
        # reflections sit close to 1, so noise is applied to the deficit there
        v = 1 - (1 - resp[q]) * (1 + n) if q.startswith("r_") else resp[q] * (1 + n)
        err = 0.01 * (1 - resp[q]) if q.startswith("r_") else 0.01 * resp[q]
        rows.append(f"{q},{v:.8g},{err:.3g}")
    (DATA / "fp_response.csv").write_text("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()

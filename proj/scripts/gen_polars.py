#!/usr/bin/env python3
"""Regenerate the bundled airfoil polar tables under polars/.

The tables are synthetic approximations written in the XFLR5 text export
layout the simulator parses. The cruise section is a mildly reflexed
low-Reynolds profile (positive zero-alpha pitching moment, stable slope)
and the hover section is symmetric. Replace these files with real XFLR5
exports of the same layout for higher fidelity; every *.txt file under
polars/<airfoil>/ becomes one Reynolds curve of that airfoil's surface.

Deterministic: rerunning produces byte-identical files.
"""

import math
import os

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "polars")

REYNOLDS = [0.050e6, 0.100e6, 0.200e6, 0.500e6]


def frange(lo, hi, step):
    n = int(round((hi - lo) / step))
    return [lo + i * step for i in range(n + 1)]


def e387_like(alpha_deg, re):
    """Reflexed cruise section: linear lift softened near stall."""
    clmax = 1.10 + 0.10 * math.log10(re / 1e5)
    cla = 0.105  # per degree
    alpha0 = -2.0
    cl = clmax * math.tanh(cla * (alpha_deg - alpha0) / clmax)
    cd0 = 0.009 + 0.013 * (1e5 / re) ** 0.4
    cd = cd0 + 0.015 * (cl - 0.25) ** 2
    cd += 0.0035 * max(0.0, abs(alpha_deg - 2.0) - 7.0) ** 1.8
    cm = 0.018 - 0.0040 * alpha_deg
    return cl, cd, cm


def naca0010_like(alpha_deg, re):
    """Symmetric hover section: cl odd, cd even, cm odd in alpha."""
    clmax = 0.92 + 0.08 * math.log10(re / 1e5)
    cla = 0.108  # per degree
    cl = clmax * math.tanh(cla * alpha_deg / clmax)
    cd0 = 0.008 + 0.012 * (1e5 / re) ** 0.4
    cd = cd0 + 0.010 * cl * cl
    cd += 0.0030 * max(0.0, abs(alpha_deg) - 9.0) ** 1.7
    cm = -0.0025 * alpha_deg
    return cl, cd, cm


AIRFOILS = {
    "E387": (e387_like, frange(-10.0, 15.0, 0.5)),
    "NACA0010": (naca0010_like, frange(-16.0, 16.0, 0.5)),
}


def write_polar(path, name, re, model, alphas):
    lines = []
    lines.append("xflr5 v6.47")
    lines.append("")
    lines.append(" Calculated polar for: %s" % name)
    lines.append("")
    lines.append(" 1 1 Reynolds number fixed          Mach number fixed         ")
    lines.append("")
    lines.append(" xtrf =   1.000 (top)        1.000 (bottom)")
    lines.append(" Mach =   0.000     Re =     %.3f e 6     Ncrit =   9.000" % (re / 1e6))
    lines.append("")
    lines.append("  alpha     CL        CD       CDp       Cm    Top Xtr Bot Xtr ")
    lines.append("  ------- -------- --------- --------- -------- ------- ------- ")
    for a in alphas:
        cl, cd, cm = model(a, re)
        cdp = 0.55 * cd
        top_xtr = max(0.02, min(1.0, 0.75 - 0.035 * a))
        bot_xtr = max(0.02, min(1.0, 0.75 + 0.035 * a))
        lines.append(" %7.3f  %7.4f  %8.5f  %8.5f  %7.4f  %6.4f  %6.4f" %
                     (a, cl, cd, cdp, cm, top_xtr, bot_xtr))
    lines.append("")
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def main():
    for name, (model, alphas) in AIRFOILS.items():
        d = os.path.join(OUT, name)
        os.makedirs(d, exist_ok=True)
        for re in REYNOLDS:
            fname = "%s_T1_Re%.3f_M0.00_N9.0.txt" % (name, re / 1e6)
            write_polar(os.path.join(d, fname), name, re, model, alphas)
            print("wrote", os.path.join(d, fname))


if __name__ == "__main__":
    main()

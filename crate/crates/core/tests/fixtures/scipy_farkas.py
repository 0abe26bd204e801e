#!/usr/bin/env python3
"""Untrusted Farkas multiplier search for rigorkit's LP files.

Usage: scipy_farkas.py problem.lp solution.txt

Reads the `Subject To` rows and `Bounds` of the emitted LP and solves
    max  sum_j u_j lo_j - w_j hi_j - b.y
    s.t. A^T y = u - w,  sum y = 1,  y, u, w >= 0
Writes `r<i> <y_i>` lines. Exits 1 if the optimum is not positive.
"""
import re
import sys

import numpy as np
from scipy.optimize import linprog


def parse(path):
    rows, rhs, bounds = [], [], {}
    section = None
    for line in open(path):
        s = line.strip()
        if not s or s.startswith("\\"):
            continue
        if s in ("Minimize", "Subject To", "Bounds", "End"):
            section = s
            continue
        if section == "Subject To":
            body, b = s.split(":", 1)[1].rsplit("<=", 1)
            coeffs = {}
            for sign, val, var in re.findall(r"([+-])\s*(\S+)\s+x(\d+)", body):
                coeffs[int(var)] = float(val) * (-1 if sign == "-" else 1)
            rows.append(coeffs)
            rhs.append(float(b))
        elif section == "Bounds":
            lo, var, hi = [t.strip() for t in s.split("<=")]
            bounds[int(var[1:])] = (float(lo), float(hi))
    n = max(bounds) + 1 if bounds else 0
    a = np.zeros((len(rows), n))
    for i, r in enumerate(rows):
        for j, v in r.items():
            a[i, j] = v
    lo = np.array([bounds[j][0] for j in range(n)])
    hi = np.array([bounds[j][1] for j in range(n)])
    return a, np.array(rhs), lo, hi


def main():
    a, b, lo, hi = parse(sys.argv[1])
    m, n = a.shape
    # variables: y (m), u (n), w (n); linprog minimizes
    c = np.concatenate([b, -lo, hi])
    eq = np.zeros((n + 1, m + 2 * n))
    eq[:n, :m] = a.T
    eq[:n, m : m + n] = -np.eye(n)
    eq[:n, m + n :] = np.eye(n)
    eq[n, :m] = 1.0
    rhs = np.zeros(n + 1)
    rhs[n] = 1.0
    res = linprog(c, A_eq=eq, b_eq=rhs, bounds=[(0, None)] * (m + 2 * n), method="highs")
    if res.status != 0 or -res.fun <= 0:
        return 1
    with open(sys.argv[2], "w") as f:
        for i, v in enumerate(res.x[:m]):
            f.write(f"r{i} {float(v)!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())

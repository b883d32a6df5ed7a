"""Dense reference implementation of the fractional cantilever scheme.

Builds each row by evaluating the left/right Caputo integrals of the
central-difference curvature with the fractional trapezoidal rule, then
solves with numpy's dense solver. Used once to freeze the table in
tests/data/sweep_oracle.csv; it shares no code with the C++ library.

    python3 tests/oracle/beam_oracle.py > tests/data/sweep_oracle.csv
"""
import sys

import numpy as np


def trapezoid_weights(alpha, m):
    p = 2.0 - alpha
    k = np.arange(m + 1, dtype=float)
    c = np.empty(m + 1)
    c[0] = 1.0
    c[1:m] = (k[1:m] - 1) ** p - 2 * k[1:m] ** p + (k[1:m] + 1) ** p
    c[m] = (m - 1) ** p - (m + alpha - 2) * m ** (1 - alpha)
    return c


def extended(j, n):
    """Fictitious-node rule as (index, coefficient) pairs."""
    if j < 0:
        return [(0, 1.0)]
    if j > n:
        return [(n, 1.0 + (j - n)), (n - 1, -float(j - n))]
    return [(j, 1.0)]


def operator_row(i, n, alpha, m):
    """Coefficients of sum_k c_k (w''_{i-k} + w''_{i+k}) * dx^2 on w_0..w_n."""
    c = trapezoid_weights(alpha, m)
    row = np.zeros(n + 1)
    for k in range(m + 1):
        for centre in (i - k, i + k):
            for node, s in ((centre - 1, 1.0), (centre, -2.0), (centre + 1, 1.0)):
                for j, e in extended(node, n):
                    row[j] += c[k] * s * e
    return row


def tip(alpha, ell, m, L=1.0, W=0.1, T=0.1, E=1.0, P=1.0):
    dx = ell / m
    n = int(round(L / dx))
    inertia = W * T ** 3 / 12
    beta = -ell ** (alpha - 1) * E * inertia / (2 * (2 - alpha) * dx ** (1 + alpha))
    a = np.zeros((n + 1, n + 1))
    b = np.zeros(n + 1)
    a[0, 0] = 1
    a[1, :3] = [-3, 4, -1]
    for i in range(1, n):
        a[i + 1] = operator_row(i, n, alpha, m)
        b[i + 1] = P * (L - i * dx) / beta
    return np.linalg.solve(a, b)[-1]


def main():
    dx = 0.01
    alphas = [0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99]
    ells = [0.02, 0.05, 0.1, 0.2, 0.4]
    out = sys.stdout
    out.write("alpha,ell_m,ratio\n")
    for ell in ells:
        m = int(round(ell / dx))
        classical = tip(1.0, ell, m)
        for alpha in alphas:
            out.write("%.16e,%.16e,%.16e\n" % (alpha, ell, tip(alpha, ell, m) / classical))
    if "--benchmark" in sys.argv:
        sys.stderr.write("alpha=0.8 ell=0.05 dx=0.001 ratio=%.16e\n"
                         % (tip(0.8, 0.05, 50) / tip(1.0, 0.05, 50)))


if __name__ == "__main__":
    main()

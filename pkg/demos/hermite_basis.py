"""Hermite polynomials and the piecewise wavelet expansion on [0, 1).

Prints a few polynomials, checks orthogonality with Gauss-Hermite
quadrature, then approximates a smooth function with 2**k cells of
M atoms each and shows how the error falls as M grows.
"""

import numpy as np

from dhwt.hermite import hermite_coeffs, orthogonality_integral, project, quadrature_nodes, truncated_reconstruct


def poly_str(coeffs):
    terms = [f"{c}x^{i}" if i else str(c) for i, c in enumerate(coeffs) if c]
    return " + ".join(reversed(terms)).replace("x^1", "x").replace("+ -", "- ")


for n in range(5):
    print(f"H_{n}(x) = {poly_str(hermite_coeffs(n))}")

gram = np.array([[orthogonality_integral(m, n, 16) for n in range(4)] for m in range(4)])
print("\nGauss-Hermite Gram matrix, m, n < 4:")
print(np.array2string(gram, precision=4, suppress_small=True))


def target(t):
    return np.exp(-3 * t) * np.sin(7 * t)


k = 2
nodes, _ = quadrature_nodes(k)
t = nodes.ravel()
print(f"\nprojection of exp(-3t) sin(7t) onto {2**k} cells:")
for M in (1, 2, 3, 4, 6):
    C = project(target, k, M)
    err = np.max(np.abs(truncated_reconstruct(C, t) - target(t)))
    print(f"  M={M}: max error {err:.2e}")

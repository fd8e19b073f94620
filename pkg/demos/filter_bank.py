"""The 2-tap Hermite filter bank next to the standard orthogonal ones.

The Hermite bank is not orthonormal: each analysis step scales energy by
2/pi, and synthesis compensates with a factor pi/2.
"""

import numpy as np

from dhwt.filters import available_wavelets, get_filter, verify_pr
from dhwt.transform import analyze_1d, packet_decompose, packet_reconstruct

for name in available_wavelets():
    f = get_filter(name)
    print(f"{name:6s} taps={len(f):2d} low={np.array2string(f.analysis_low[:4], precision=5)}"
          f"{' ...' if len(f) > 4 else ''}  PR={verify_pr(f, 1e-12)}")

F = get_filter("dhwt").analysis_matrix()
print("\nF F^T =\n", F @ F.T, "\n2/pi =", 2 / np.pi)

rng = np.random.default_rng(0)
x = rng.normal(size=64)
a, d = analyze_1d(x, "dhwt")
print(f"\nenergy ratio after one step: {(a @ a + d @ d) / (x @ x):.12f}")

# a chirp splits unevenly across the 8 packet bands
t = np.linspace(0, 1, 256, endpoint=False)
tree = packet_decompose(np.sin(2 * np.pi * (4 + 40 * t) * t), "dhwt", 3)
energy = np.array([b @ b for b in tree.bands])
print("\npacket band energy share (%):", np.round(100 * energy / energy.sum(), 2))
print("packet round trip error:", np.max(np.abs(packet_reconstruct(tree) - np.sin(2 * np.pi * (4 + 40 * t) * t))))

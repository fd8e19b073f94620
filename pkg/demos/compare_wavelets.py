"""Same image, same threshold, four wavelets, levels 1 to 8."""

from dhwt import comparison_table, synthetic_image

rows = comparison_table(synthetic_image(), ["dhwt", "sym2", "coif2", "db2"], range(1, 9), 100.0)

print(f"{'wavelet':8s}" + "".join(f"{'L' + str(l):>9s}" for l in range(1, 9)))
for wid in ("dhwt", "sym2", "coif2", "db2"):
    psnrs = [r["psnr"] for r in rows if r["wavelet"] == wid]
    print(f"{wid:8s}" + "".join(f"{p:9.2f}" for p in psnrs))

# the Hermite taps are Haar taps scaled by sqrt(2/pi), so a fixed threshold
# cuts deeper into its coarse levels than into those of the orthonormal banks
print("\ncoefficients kept (%):")
for wid in ("dhwt", "sym2", "coif2", "db2"):
    crs = [r["cr_percent"] for r in rows if r["wavelet"] == wid]
    print(f"{wid:8s}" + "".join(f"{c:9.2f}" for c in crs))

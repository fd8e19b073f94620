"""Compress the built-in test image, then sweep the threshold schedule.

Writes ``demo_original.png`` and ``demo_decoded.png`` to the current
directory so the two can be compared by eye.
"""

from dhwt import ThresholdSchedule, compress_image, compression_loop, decompress_image, synthetic_image
from dhwt.imageio import write_image

img = synthetic_image()
ci, report = compress_image(img, "dhwt", levels=2, schedule=100.0)
raw = img.size
print(f"T=100: {len(ci)} bytes for {raw} raw bytes ({100 * len(ci) / raw:.1f}%)")
print(f"  psnr {report.psnr:.2f} dB, {report.cr:.2f}% coefficients kept, {report.bpp:.3f} bpp")
print(f"  {report.energy_retained:.2f}% of the energy survives, {report.zero_share:.2f}% zeros")

write_image("demo_original.png", img)
write_image("demo_decoded.png", decompress_image(ci))

print("\nloop  threshold      mse     psnr     cr%")
schedule = ThresholdSchedule()
for i, r in enumerate(compression_loop(img, "dhwt", 2, schedule), start=1):
    T = schedule.thresholds(i, 1)[0]
    print(f"{i:4d} {T:10.3f} {r.mse:8.3f} {r.psnr:8.2f} {r.cr:7.2f}")

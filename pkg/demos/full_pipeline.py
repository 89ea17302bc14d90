#!/usr/bin/env python3
"""One image through the whole pipeline, against the uniform baseline.

Generates a half-gradient / half-texture image, runs the multi-scale
round trip and the all-mid-factor one, prints the block plan as a map,
and writes the input and both reconstructions to demos/out/.
"""

from pathlib import Path

from bbmr import (PipelineConfig, roundtrip, save_png, uniform_baseline_plan)
from bbmr.synthetic import half_and_half_image

out_dir = Path(__file__).parent / "out"
out_dir.mkdir(exist_ok=True)

image = half_and_half_image(512, seed=1003)
config = PipelineConfig()  # factors 2,4,8; block 128; bicubic

multi = roundtrip(image, config)
uniform = roundtrip(image, config,
                    plan_override=uniform_baseline_plan(image, config))

# ---------------------------------------------------------------------------
# the plan as a map over the block grid
# ---------------------------------------------------------------------------
glyph = {1: "#", 2: ".", 3: "o"}  # fine / mid / coarse
cols = multi.grid.cols
print("block plan (# promoted, . mid, o demoted):")
for row in range(multi.grid.rows):
    line = "".join(glyph[int(c)]
                   for c in multi.plan.codes[row * cols:(row + 1) * cols])
    print(f"  {line}")
print()

# ---------------------------------------------------------------------------
# quality, seams, budget
# ---------------------------------------------------------------------------
n1, n2, n3 = multi.plan.counts()
print(f"trades: {multi.plan.trades} "
      f"(promoted {n1}, demoted {n3} of {multi.grid.n_blocks} blocks)")
print(f"luma PSNR: multi-scale {multi.psnr_db:.2f} dB, "
      f"uniform {uniform.psnr_db:.2f} dB "
      f"(gain {multi.psnr_db - uniform.psnr_db:+.2f} dB)")
print(f"seam index: {multi.seam_index_raw:.2f} before deblocking, "
      f"{multi.seam_index_final:.2f} after")
print(f"container: {multi.container_bytes} bytes, "
      f"uniform {uniform.container_bytes} bytes (identical budget)")
print()

save_png(image, out_dir / "input.png")
save_png(multi.reconstructed, out_dir / "multiscale.png")
save_png(uniform.reconstructed, out_dir / "uniform.png")
print(f"wrote input.png, multiscale.png, uniform.png under {out_dir}/")
print("look at the textured half: the uniform version blurs it, the")
print("multi-scale one keeps it at the cost of the smooth half, which")
print("survives coarse storage without visible change")

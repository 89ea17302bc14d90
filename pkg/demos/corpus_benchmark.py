#!/usr/bin/env python3
"""Benchmark a small synthetic corpus and write the JSON/CSV reports.

Renders a few mixed-content images to demos/out/corpus/, runs the
benchmark harness over them (with the proxy-kernel comparison switched
on), prints the aggregate table, and validates the report against the
bundled schema when jsonschema is installed.
"""

from pathlib import Path

from bbmr import (PipelineConfig, bench_corpus, load_report_schema, save_png)
from bbmr.bench import report_to_csv, write_report
from bbmr.synthetic import half_and_half_image

out_dir = Path(__file__).parent / "out"
corpus_dir = out_dir / "corpus"
corpus_dir.mkdir(parents=True, exist_ok=True)

# ---------------------------------------------------------------------------
# render the corpus
# ---------------------------------------------------------------------------
seeds = (1000, 1001, 1002, 1003)
for seed in seeds:
    path = corpus_dir / f"mixed_{seed}.png"
    if not path.exists():
        save_png(half_and_half_image(384, seed=seed), path)
print(f"corpus: {len(seeds)} images under {corpus_dir}/")

# ---------------------------------------------------------------------------
# run the harness
# ---------------------------------------------------------------------------
config = PipelineConfig(block_w=64, block_h=64)
report = bench_corpus(sorted(corpus_dir.glob("*.png")), config,
                      compare_proxy=True)

agg = report["aggregate"]
print(f"{agg['count']} images, {agg['total_blocks']} blocks")
print(f"  mean PSNR      uniform {agg['mean_psnr_uniform_db']:.2f} dB, "
      f"multi-scale {agg['mean_psnr_multiscale_db']:.2f} dB "
      f"(gain {agg['mean_gain_db']:+.2f} dB)")
print(f"  mean seams     {agg['mean_seam_index_raw']:.2f} raw -> "
      f"{agg['mean_seam_index_deblocked']:.2f} deblocked")
print(f"  taxonomy       " + "  ".join(
    f"{k} {v:.1%}" for k, v in agg["taxonomy_fractions"].items()))
print(f"  proxy          agreement {agg['mean_proxy_plan_agreement']:.3f}, "
      f"delta {agg['mean_proxy_psnr_delta_db']:.3f} dB")

write_report(report, out_dir / "report.json")
report_to_csv(report, out_dir / "report.csv")
print(f"wrote report.json and report.csv under {out_dir}/")

try:
    import jsonschema
except ImportError:
    print("jsonschema not installed; skipping schema validation")
else:
    jsonschema.validate(report, load_report_schema())
    print("report validates against the bundled schema")

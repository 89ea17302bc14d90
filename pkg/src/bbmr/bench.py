"""Corpus benchmarking: per-image records, block taxonomy, JSON/CSV reports.

Every record compares the multi-scale pipeline against the uniform
middle-factor baseline on the same image, through the same stitching and
deblocking path, so the gain column isolates the allocation itself.
Reports are deterministic except for the ``timing`` subtrees.
"""

import csv
import json
import os
import time
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .image import load_png
from .pipeline import PipelineConfig, plan_image, roundtrip, uniform_baseline_plan

SCHEMA_VERSION = 1

# Repo-default taxonomy thresholds, in dB.  A block is "simple" when demoting
# it to the coarse factor barely hurts, "hard" when promoting it to the fine
# factor pays off a lot.
SIMPLE_MAX_PAY_DB = 1.5
HARD_MIN_EARN_DB = 4.0


@dataclass(frozen=True)
class TaxonomyThresholds:
    simple_max_pay_db: float = SIMPLE_MAX_PAY_DB
    hard_min_earn_db: float = HARD_MIN_EARN_DB


def classify_blocks(scores: np.ndarray,
                    thresholds: TaxonomyThresholds = TaxonomyThresholds()
                    ) -> list[str]:
    """Label every block simple / medium / hard from its candidate scores."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = []
    for fine, mid, coarse in scores:
        # hard wins when both tests pass: a block whose detail comes back at
        # the fine factor is the scarce prize even if demoting it is cheap
        if fine - mid > thresholds.hard_min_earn_db:
            labels.append("hard")
        elif mid - coarse < thresholds.simple_max_pay_db:
            labels.append("simple")
        else:
            labels.append("medium")
    return labels


def _round(x: float, places: int = 4) -> float:
    return round(float(x), places)


def bench_image(image: np.ndarray, config: PipelineConfig, name: str = "",
                thresholds: TaxonomyThresholds = TaxonomyThresholds(),
                compare_proxy: bool = False) -> dict:
    """One benchmark record: multi-scale vs uniform on a single image."""
    t_start = time.perf_counter()
    multi = roundtrip(image, config)
    uniform = roundtrip(image, config,
                        plan_override=uniform_baseline_plan(image, config))
    labels = classify_blocks(multi.scores, thresholds)
    n1, n2, n3 = multi.plan.counts()
    record = {
        "image": name,
        "width": int(image.shape[1]),
        "height": int(image.shape[0]),
        "blocks": multi.grid.n_blocks,
        "trades": multi.plan.trades,
        "plan_histogram": {"k1": n1, "k2": n2, "k3": n3},
        "psnr_uniform_db": _round(uniform.psnr_db),
        "psnr_multiscale_db": _round(multi.psnr_db),
        "gain_db": _round(multi.psnr_db - uniform.psnr_db),
        "seam_index_raw": _round(multi.seam_index_raw),
        "seam_index_deblocked": _round(multi.seam_index_final),
        "container_bytes": multi.container_bytes,
        "container_bytes_uniform": uniform.container_bytes,
        "taxonomy": {label: labels.count(label)
                     for label in ("simple", "medium", "hard")},
        "timing": {k: _round(v, 6) for k, v in multi.timing.items()},
    }
    if compare_proxy:
        record.update(_proxy_comparison(image, config, multi))
    record["timing"]["total_s"] = _round(time.perf_counter() - t_start, 6)
    return record


def _proxy_comparison(image: np.ndarray, config: PipelineConfig, multi) -> dict:
    """Re-plan with the other scoring kernel and measure the quality gap."""
    other_mode = "proxy" if config.allocate_with == "final" else "final"
    other = replace(config, allocate_with=other_mode)
    _, _, other_plan, _ = plan_image(image, other)
    transferred = roundtrip(image, config, plan_override=other_plan)
    agreement = float(np.mean(np.asarray(other_plan.codes) ==
                              np.asarray(multi.plan.codes)))
    return {
        "proxy_plan_agreement": _round(agreement),
        "proxy_psnr_delta_db": _round(abs(multi.psnr_db - transferred.psnr_db)),
    }


def bench_corpus(paths: list, config: PipelineConfig,
                 thresholds: TaxonomyThresholds = TaxonomyThresholds(),
                 compare_proxy: bool = False,
                 warn=lambda msg: None) -> dict:
    """Benchmark a list of PNG paths into a full report.

    Unreadable files are skipped with a warning callback; an empty result
    set raises.  Records are ordered by input path for determinism.
    """
    t_start = time.perf_counter()
    records = []
    for path in sorted(str(p) for p in paths):
        try:
            image = load_png(path)
        except Exception as exc:  # unreadable / unsupported file
            warn(f"skipping {path}: {exc}")
            continue
        records.append(bench_image(image, config, name=os.path.basename(path),
                                   thresholds=thresholds,
                                   compare_proxy=compare_proxy))
    if not records:
        raise ValueError("no readable images in the corpus")
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": config_dict(config, thresholds),
        "images": records,
        "aggregate": aggregate_records(records),
        "timing": {"total_s": _round(time.perf_counter() - t_start, 6)},
    }
    return report


def config_dict(config: PipelineConfig,
                thresholds: TaxonomyThresholds = TaxonomyThresholds()) -> dict:
    return {
        "factors": [config.factors.k1, config.factors.k2, config.factors.k3],
        "block": [config.block_h, config.block_w],
        "final_kernel": config.final_kernel,
        "proxy_kernel": config.proxy_kernel,
        "allocate_with": config.allocate_with,
        "threshold_db": config.threshold_db,
        "deblock": config.deblock,
        "deblock_radius": config.deblock_radius,
        "taxonomy_simple_db": thresholds.simple_max_pay_db,
        "taxonomy_hard_db": thresholds.hard_min_earn_db,
    }


def aggregate_records(records: list[dict]) -> dict:
    def mean_of(key):
        return _round(float(np.mean([r[key] for r in records])))

    taxonomy_totals = {"simple": 0, "medium": 0, "hard": 0}
    total_blocks = 0
    for r in records:
        for label, count in r["taxonomy"].items():
            taxonomy_totals[label] += count
        total_blocks += r["blocks"]
    agg = {
        "count": len(records),
        "total_blocks": total_blocks,
        "mean_psnr_uniform_db": mean_of("psnr_uniform_db"),
        "mean_psnr_multiscale_db": mean_of("psnr_multiscale_db"),
        "mean_gain_db": mean_of("gain_db"),
        "mean_seam_index_raw": mean_of("seam_index_raw"),
        "mean_seam_index_deblocked": mean_of("seam_index_deblocked"),
        "taxonomy_fractions": {
            label: _round(count / total_blocks)
            for label, count in taxonomy_totals.items()
        },
    }
    if records and "proxy_plan_agreement" in records[0]:
        agg["mean_proxy_plan_agreement"] = mean_of("proxy_plan_agreement")
        agg["mean_proxy_psnr_delta_db"] = mean_of("proxy_psnr_delta_db")
    return agg


def write_report(report: dict, path) -> None:
    Path(path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


def report_to_csv(report: dict, path) -> None:
    """Flatten the per-image records into one CSV row each."""
    rows = []
    for rec in report["images"]:
        row = {k: v for k, v in rec.items()
               if not isinstance(v, dict)}
        row.update({f"taxonomy_{k}": v for k, v in rec["taxonomy"].items()})
        row.update({f"plan_{k}": v for k, v in rec["plan_histogram"].items()})
        rows.append(row)
    fieldnames = list(rows[0].keys())
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)


def load_report_schema() -> dict:
    """The JSON schema the report format is pinned to."""
    text = resources.files("bbmr").joinpath("schemas/report-v1.schema.json") \
        .read_text()
    return json.loads(text)

"""End-to-end compress / reconstruct orchestration.

``compress`` turns an RGB image into a container (plan + mixed-resolution
blocks); ``reconstruct`` turns a container back into a full-resolution
image.  The stored blocks always come from the final-quality kernel; the
proxy kernel, when selected, is used only to score blocks during
allocation.
"""

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .allocate import (BudgetRatio, FactorTriple, ScalePlan, allocate,
                       build_trade_arrays, default_block_max,
                       evaluate_candidates, solve_budget_ratio, uniform_plan)
from .container import ContainerHeader, container_size, encode
from .image import BlockGrid, extract_block, pad_reflect, partition, validate_raster
from .metrics import psnr
from .resample import Scaler, downscale, make_scaler, upscale
from .stitch import (StitchCanvas, crop_to_original, edge_replace, seam_filter,
                     seam_index, stitch)

DEFAULT_FACTORS = (2, 4, 8)
DEFAULT_BLOCK = 128
DEFAULT_THRESHOLD_DB = 0.5
DEFAULT_DEBLOCK_RADIUS = 2


@dataclass(frozen=True)
class PipelineConfig:
    factors: FactorTriple = field(default_factory=lambda: FactorTriple(*DEFAULT_FACTORS))
    block_w: int = DEFAULT_BLOCK
    block_h: int = DEFAULT_BLOCK
    final_kernel: str = "bicubic"
    proxy_kernel: str = "bilinear"
    allocate_with: str = "final"  # which kernel scores the candidates
    threshold_db: float = DEFAULT_THRESHOLD_DB
    block_max_k1: int | None = None  # None = as many trades as fit
    deblock: bool = True
    deblock_radius: int = DEFAULT_DEBLOCK_RADIUS

    def __post_init__(self):
        if self.allocate_with not in ("final", "proxy"):
            raise ValueError(
                f"allocate_with must be 'final' or 'proxy', got {self.allocate_with!r}")

    def final_scaler(self) -> Scaler:
        return make_scaler(self.final_kernel, "final")

    def proxy_scaler(self) -> Scaler:
        return make_scaler(self.proxy_kernel, "proxy")

    def allocation_scaler(self) -> Scaler:
        return self.proxy_scaler() if self.allocate_with == "proxy" \
            else self.final_scaler()


@dataclass(frozen=True, eq=False)
class CompressResult:
    header: ContainerHeader
    plan: ScalePlan
    lr_blocks: list[np.ndarray]
    grid: BlockGrid
    scores: np.ndarray
    timing: dict[str, float]

    @property
    def container_bytes(self) -> int:
        return container_size(self.plan.codes, self.header)

    def to_bytes(self) -> bytes:
        return encode(self.header, self.plan.codes, self.lr_blocks)


def plan_image(image: np.ndarray, config: PipelineConfig
               ) -> tuple[BlockGrid, np.ndarray, ScalePlan, list[np.ndarray]]:
    """Partition, score, and allocate; returns (grid, scores, plan, hr blocks)."""
    image = validate_raster(image)
    grid = partition(image, config.block_h, config.block_w, config.factors.k3)
    padded = pad_reflect(image, grid.padded_w, grid.padded_h)
    hr_blocks = [extract_block(padded, grid, i) for i in range(grid.n_blocks)]
    # the stored representation always comes from the final kernel, so the
    # scoring round trip downsamples with it even when a proxy reconstructs
    scores = evaluate_candidates(grid, hr_blocks, config.factors,
                                 config.allocation_scaler(),
                                 down_scaler=config.final_scaler())
    ratio = solve_budget_ratio(config.factors, config.block_h, config.block_w)
    arrays = build_trade_arrays(scores)
    block_max = config.block_max_k1
    if block_max is None:
        block_max = default_block_max(grid.n_blocks, ratio)
    plan = allocate(arrays, ratio, config.threshold_db, block_max,
                    grid.n_blocks, config.factors)
    return grid, scores, plan, hr_blocks


def compress(image: np.ndarray, config: PipelineConfig,
             plan_override: ScalePlan | None = None) -> CompressResult:
    """Produce the container contents for an image.

    ``plan_override`` skips allocation and stores under the given plan
    (used for the uniform baseline and for plan-transfer experiments).
    """
    t0 = time.perf_counter()
    if plan_override is None:
        grid, scores, plan, hr_blocks = plan_image(image, config)
    else:
        image = validate_raster(image)
        grid = partition(image, config.block_h, config.block_w, config.factors.k3)
        padded = pad_reflect(image, grid.padded_w, grid.padded_h)
        hr_blocks = [extract_block(padded, grid, i) for i in range(grid.n_blocks)]
        scores = np.empty((0, 3))
        plan = plan_override
        if len(plan.codes) != grid.n_blocks:
            raise ValueError("plan does not match the image's block grid")
    t1 = time.perf_counter()

    final = config.final_scaler()
    lr_blocks = [
        downscale(block, plan.factors.for_code(int(code)), final)
        for block, code in zip(hr_blocks, plan.codes)
    ]
    t2 = time.perf_counter()

    header = ContainerHeader(
        orig_w=grid.orig_w, orig_h=grid.orig_h,
        block_w=grid.block_w, block_h=grid.block_h,
        k1=config.factors.k1, k2=config.factors.k2, k3=config.factors.k3,
        n_blocks=grid.n_blocks)
    return CompressResult(header=header, plan=plan, lr_blocks=lr_blocks,
                          grid=grid, scores=scores,
                          timing={"allocate_s": t1 - t0, "downscale_s": t2 - t1})


def reconstruct(header: ContainerHeader, codes, lr_blocks: list[np.ndarray],
                config: PipelineConfig) -> np.ndarray:
    """Upscale, stitch, deblock (optionally), and crop to original size."""
    grid = BlockGrid(
        cols=-(-header.orig_w // header.block_w),
        rows=-(-header.orig_h // header.block_h),
        block_w=header.block_w, block_h=header.block_h,
        orig_w=header.orig_w, orig_h=header.orig_h)
    factors = (header.k1, header.k2, header.k3)
    final = config.final_scaler()
    sr_blocks = [
        upscale(block, factors[int(code) - 1], final)
        for block, code in zip(lr_blocks, codes)
    ]
    canvas = stitch(sr_blocks, grid)
    if config.deblock:
        strips = seam_filter(canvas, config.deblock_radius)
        return edge_replace(canvas, strips)
    return crop_to_original(canvas)


@dataclass(frozen=True, eq=False)
class RoundtripResult:
    reconstructed: np.ndarray
    plan: ScalePlan
    grid: BlockGrid
    scores: np.ndarray
    psnr_db: float
    psnr_raw_db: float  # before deblocking
    seam_index_raw: float
    seam_index_final: float
    container_bytes: int
    timing: dict[str, float]


def roundtrip(image: np.ndarray, config: PipelineConfig,
              plan_override: ScalePlan | None = None) -> RoundtripResult:
    """Compress then reconstruct in memory, collecting quality statistics."""
    comp = compress(image, config, plan_override=plan_override)
    t0 = time.perf_counter()
    sr = reconstruct(comp.header, comp.plan.codes, comp.lr_blocks, config)
    t1 = time.perf_counter()

    # raw (no deblocking) reconstruction, for seam and quality comparison
    if config.deblock:
        raw_config = replace(config, deblock=False)
        raw = reconstruct(comp.header, comp.plan.codes, comp.lr_blocks,
                          raw_config)
    else:
        raw = sr
    idx_raw = seam_index(raw, comp.grid)
    idx_final = seam_index(sr, comp.grid)

    quality = psnr(image, sr).value
    quality_raw = quality if raw is sr else psnr(image, raw).value
    timing = dict(comp.timing)
    timing["reconstruct_s"] = t1 - t0
    return RoundtripResult(reconstructed=sr, plan=comp.plan, grid=comp.grid,
                           scores=comp.scores, psnr_db=quality,
                           psnr_raw_db=quality_raw,
                           seam_index_raw=idx_raw, seam_index_final=idx_final,
                           container_bytes=comp.container_bytes, timing=timing)


def uniform_baseline_plan(image: np.ndarray, config: PipelineConfig) -> ScalePlan:
    """The all-middle-factor plan for this image's grid."""
    image = validate_raster(image)
    grid = partition(image, config.block_h, config.block_w, config.factors.k3)
    ratio = solve_budget_ratio(config.factors, config.block_h, config.block_w)
    return uniform_plan(grid.n_blocks, config.factors, ratio, config.threshold_db)

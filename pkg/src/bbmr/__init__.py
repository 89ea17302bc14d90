"""Block-based multi-scale image rescaling.

Split an image into fixed-size blocks, score how much each block suffers
under coarser downscaling, then trade pixel budget between blocks so that
detailed regions keep a fine scale factor while smooth regions absorb a
coarse one, at exactly the pixel cost of scaling everything uniformly.
Plans serialize to a compact container and reconstruct with seam-aware
stitching.
"""

from .allocate import (BudgetRatio, FactorTriple, ScalePlan, TradeArrays,
                       allocate, build_trade_arrays, evaluate_candidates,
                       oracle_allocate, solve_budget_ratio, uniform_plan)
from .bench import (TaxonomyThresholds, bench_corpus, bench_image,
                    classify_blocks, load_report_schema)
from .container import (BadMagicError, ChecksumMismatchError, ContainerError,
                        ContainerHeader, FormatError, TruncatedStreamError,
                        UnsupportedVersionError, container_size, decode,
                        encode)
from .image import (BlockGrid, extract_block, load_png, pad_reflect,
                    partition, save_png, to_luma)
from .metrics import ChannelMode, PsnrResult, psnr, psnr_block_table
from .pipeline import (CompressResult, PipelineConfig, RoundtripResult,
                       compress, plan_image, reconstruct, roundtrip,
                       uniform_baseline_plan)
from .resample import Scaler, ScalerRole, downscale, make_scaler, upscale
from .stitch import (StitchCanvas, crop_to_original, edge_replace,
                     seam_filter, seam_index, stitch)

__version__ = "0.1.0"

__all__ = [
    "BadMagicError",
    "BlockGrid",
    "BudgetRatio",
    "ChannelMode",
    "ChecksumMismatchError",
    "CompressResult",
    "ContainerError",
    "ContainerHeader",
    "FactorTriple",
    "FormatError",
    "PipelineConfig",
    "PsnrResult",
    "RoundtripResult",
    "ScalePlan",
    "Scaler",
    "ScalerRole",
    "StitchCanvas",
    "TaxonomyThresholds",
    "TradeArrays",
    "TruncatedStreamError",
    "UnsupportedVersionError",
    "allocate",
    "bench_corpus",
    "bench_image",
    "build_trade_arrays",
    "classify_blocks",
    "compress",
    "container_size",
    "crop_to_original",
    "decode",
    "downscale",
    "edge_replace",
    "encode",
    "evaluate_candidates",
    "extract_block",
    "load_png",
    "load_report_schema",
    "make_scaler",
    "oracle_allocate",
    "pad_reflect",
    "partition",
    "plan_image",
    "psnr",
    "psnr_block_table",
    "reconstruct",
    "roundtrip",
    "save_png",
    "seam_filter",
    "seam_index",
    "solve_budget_ratio",
    "stitch",
    "to_luma",
    "uniform_baseline_plan",
    "uniform_plan",
    "upscale",
]

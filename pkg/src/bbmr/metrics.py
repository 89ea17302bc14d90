"""Reference quality metrics.

PSNR is computed against a 255 peak and capped at 100 dB so lossless
round trips stay finite, sortable, and serializable.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .image import BlockGrid, extract_block, to_luma, validate_raster

PSNR_CAP_DB = 100.0


class ChannelMode(Enum):
    LUMA = "luma"
    RGB = "rgb"


@dataclass(frozen=True)
class PsnrResult:
    value: float
    mse: float
    channel_mode: ChannelMode


def psnr(a: np.ndarray, b: np.ndarray,
         mode: str | ChannelMode = ChannelMode.LUMA) -> PsnrResult:
    """Peak signal-to-noise ratio between two equal-size rasters.

    Luma mode converts both images to real-valued BT.601 luma before the
    mean squared error; RGB mode averages the squared error over all three
    channels.
    """
    a = validate_raster(a)
    b = validate_raster(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    mode = ChannelMode(mode)
    if mode is ChannelMode.LUMA:
        diff = to_luma(a) - to_luma(b)
    else:
        diff = a.astype(np.float64) - b.astype(np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return PsnrResult(PSNR_CAP_DB, 0.0, mode)
    value = 10.0 * math.log10(255.0 ** 2 / mse)
    return PsnrResult(min(value, PSNR_CAP_DB), mse, mode)


def psnr_block_table(reference: np.ndarray, reconstructed: np.ndarray,
                     grid: BlockGrid) -> list[float]:
    """Per-block luma PSNR between a reference and its reconstruction.

    Both images must be at the grid's padded dimensions; the result lists
    one dB value per block in row-major order.
    """
    reference = validate_raster(reference)
    reconstructed = validate_raster(reconstructed)
    if reference.shape != reconstructed.shape:
        raise ValueError(
            f"dimension mismatch: {reference.shape} vs {reconstructed.shape}")
    return [
        psnr(extract_block(reference, grid, i),
             extract_block(reconstructed, grid, i)).value
        for i in range(grid.n_blocks)
    ]

"""Stitching reconstructed blocks and suppressing the seams between them.

Blocks are placed without overlap, so an eyeball-visible discontinuity can
appear along internal block boundaries.  The deblocker smooths a narrow
strip centered on each boundary with a 5-tap binomial low-pass and writes
the filtered values back; pixels outside the strips are never touched.
:func:`seam_index` quantifies how much the boundaries stand out against
mid-block control positions.
"""

from dataclasses import dataclass

import numpy as np

from .image import BlockGrid, to_luma, validate_raster

# binomial [1, 4, 6, 4, 1] / 16; preserves DC exactly
_BINOMIAL5 = np.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0


@dataclass(frozen=True, eq=False)
class StitchCanvas:
    raster: np.ndarray  # (padded_h, padded_w, 3) uint8
    grid: BlockGrid


@dataclass(frozen=True, eq=False)
class SeamStrips:
    """Boundary strips of half-width ``radius`` plus their filtered pixels.

    ``rects`` are (y0, y1, x0, x1) in padded canvas coordinates; ``patches``
    holds the replacement samples for each rect.
    """

    radius: int
    rects: list[tuple[int, int, int, int]]
    patches: list[np.ndarray]


def stitch(sr_blocks: list[np.ndarray], grid: BlockGrid) -> StitchCanvas:
    """Place full-resolution blocks at their grid rectangles, no blending."""
    if len(sr_blocks) != grid.n_blocks:
        raise ValueError(f"expected {grid.n_blocks} blocks, got {len(sr_blocks)}")
    canvas = np.empty((grid.padded_h, grid.padded_w, 3), dtype=np.uint8)
    for i, block in enumerate(sr_blocks):
        block = validate_raster(block)
        if block.shape[:2] != (grid.block_h, grid.block_w):
            raise ValueError(
                f"block {i} is {block.shape[0]}x{block.shape[1]}, grid expects "
                f"{grid.block_h}x{grid.block_w}")
        y0, y1, x0, x1 = grid.block_rect(i)
        canvas[y0:y1, x0:x1] = block
    return StitchCanvas(raster=canvas, grid=grid)


def _binomial_smooth(image: np.ndarray) -> np.ndarray:
    """Separable 5-tap binomial filter, edge-clamped, float64 result."""
    h, w = image.shape[:2]
    padded = np.pad(image.astype(np.float64), ((2, 2), (0, 0), (0, 0)), mode="edge")
    out = sum(wt * padded[i:i + h] for i, wt in enumerate(_BINOMIAL5))
    padded = np.pad(out, ((0, 0), (2, 2), (0, 0)), mode="edge")
    return sum(wt * padded[:, i:i + w] for i, wt in enumerate(_BINOMIAL5))


def seam_filter(canvas: StitchCanvas, radius: int = 2) -> SeamStrips:
    """Low-pass the canvas and collect the filtered boundary strips.

    A strip of width ``2 * radius`` straddles every internal block boundary;
    the returned patches are the smoothed pixel values inside those strips,
    quantized once.  Requires ``2 * radius`` to fit inside a block.
    """
    grid = canvas.grid
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    if 2 * radius >= min(grid.block_w, grid.block_h):
        raise ValueError(
            f"strip width {2 * radius} does not fit inside "
            f"{grid.block_h}x{grid.block_w} blocks")
    raster = validate_raster(canvas.raster)
    if raster.shape[:2] != (grid.padded_h, grid.padded_w):
        raise ValueError("canvas raster does not match its grid")

    rects = []
    for m in range(1, grid.rows):
        y = m * grid.block_h
        rects.append((y - radius, y + radius, 0, grid.padded_w))
    for m in range(1, grid.cols):
        x = m * grid.block_w
        rects.append((0, grid.padded_h, x - radius, x + radius))

    smoothed = np.clip(np.floor(_binomial_smooth(raster) + 0.5),
                       0.0, 255.0).astype(np.uint8)
    patches = [smoothed[y0:y1, x0:x1].copy() for y0, y1, x0, x1 in rects]
    return SeamStrips(radius=radius, rects=rects, patches=patches)


def edge_replace(canvas: StitchCanvas, strips: SeamStrips) -> np.ndarray:
    """Overwrite the seam strips with their filtered values, then crop the
    canvas back to the original (pre-padding) dimensions."""
    grid = canvas.grid
    raster = validate_raster(canvas.raster).copy()
    for (y0, y1, x0, x1), patch in zip(strips.rects, strips.patches):
        if patch.shape[:2] != (y1 - y0, x1 - x0):
            raise ValueError("strip patch does not match its rectangle")
        raster[y0:y1, x0:x1] = patch
    return raster[:grid.orig_h, :grid.orig_w]


def crop_to_original(canvas: StitchCanvas) -> np.ndarray:
    """Crop a canvas to the original dimensions without deblocking."""
    return validate_raster(canvas.raster)[:canvas.grid.orig_h, :canvas.grid.orig_w].copy()


def seam_index(image: np.ndarray, grid: BlockGrid) -> float:
    """How much block boundaries stand out, as a ratio against mid-block.

    Mean absolute second difference of luma across every internal boundary,
    divided by the same statistic at positions offset by half a block.  1.0
    means seams are indistinguishable from the interior; bigger is worse.
    Returns 1.0 when there are no internal boundaries or the control
    statistic is zero.
    """
    image = validate_raster(image)
    luma = to_luma(image)
    h, w = luma.shape

    def second_diff_cols(cols):
        vals = []
        for c in cols:
            if 1 <= c <= w - 2:
                vals.append(np.abs(luma[:, c - 1] - 2.0 * luma[:, c] + luma[:, c + 1]))
        return vals

    def second_diff_rows(rows):
        vals = []
        for r in rows:
            if 1 <= r <= h - 2:
                vals.append(np.abs(luma[r - 1, :] - 2.0 * luma[r, :] + luma[r + 1, :]))
        return vals

    seam_cols = [m * grid.block_w for m in range(1, grid.cols)]
    seam_rows = [m * grid.block_h for m in range(1, grid.rows)]
    ctrl_cols = [c - grid.block_w // 2 for c in seam_cols]
    ctrl_rows = [r - grid.block_h // 2 for r in seam_rows]

    seam_vals = second_diff_cols(seam_cols) + second_diff_rows(seam_rows)
    ctrl_vals = second_diff_cols(ctrl_cols) + second_diff_rows(ctrl_rows)
    if not seam_vals or not ctrl_vals:
        return 1.0
    seam_stat = float(np.mean(np.concatenate(seam_vals)))
    ctrl_stat = float(np.mean(np.concatenate(ctrl_vals)))
    if ctrl_stat == 0.0:
        return 1.0
    return seam_stat / ctrl_stat

"""Raster images, block grids, and color utilities.

An image is a ``(height, width, 3)`` uint8 numpy array holding interleaved
RGB samples; a luma plane is a ``(height, width)`` float64 array.  All
functions here are pure and never mutate their inputs, so values can be
shared freely across threads.
"""

import math
from dataclasses import dataclass

import numpy as np
from PIL import Image

# Full-range BT.601 luma weights.  Kept real-valued (no re-quantization) so
# dB comparisons downstream are not biased by rounding.
LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114], dtype=np.float64)


def validate_raster(image: np.ndarray) -> np.ndarray:
    """Check that ``image`` is a non-empty (h, w, 3) uint8 array."""
    arr = np.asarray(image)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected (h, w, 3) RGB raster, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("image must have at least one row and one column")
    if arr.dtype != np.uint8:
        raise ValueError(f"expected uint8 samples, got {arr.dtype}")
    return arr


@dataclass(frozen=True)
class BlockGrid:
    """Partition of an image into a fixed-size block lattice.

    Padded dimensions are the smallest multiples of the block size covering
    the original image; blocks are indexed row-major.
    """

    cols: int
    rows: int
    block_w: int
    block_h: int
    orig_w: int
    orig_h: int

    @property
    def padded_w(self) -> int:
        return self.cols * self.block_w

    @property
    def padded_h(self) -> int:
        return self.rows * self.block_h

    @property
    def n_blocks(self) -> int:
        return self.cols * self.rows

    def block_rect(self, i: int) -> tuple[int, int, int, int]:
        """Return (y0, y1, x0, x1) of block ``i`` in padded coordinates."""
        if not 0 <= i < self.n_blocks:
            raise IndexError(f"block index {i} out of range [0, {self.n_blocks})")
        row, col = divmod(i, self.cols)
        y0 = row * self.block_h
        x0 = col * self.block_w
        return y0, y0 + self.block_h, x0, x0 + self.block_w


def partition(image: np.ndarray, block_h: int, block_w: int, k3: int) -> BlockGrid:
    """Lay a block grid over ``image``, padding up to whole blocks.

    ``k3`` is the coarsest downscale factor the blocks will be subjected to;
    both block dimensions must divide by it so every low-resolution block
    has integer dimensions.
    """
    image = validate_raster(image)
    if block_h < k3 or block_w < k3:
        raise ValueError(f"block size {block_h}x{block_w} smaller than factor {k3}")
    if block_h % k3 or block_w % k3:
        raise ValueError(f"block size {block_h}x{block_w} not divisible by factor {k3}")
    h, w = image.shape[:2]
    rows = math.ceil(h / block_h)
    cols = math.ceil(w / block_w)
    return BlockGrid(cols=cols, rows=rows, block_w=block_w, block_h=block_h,
                     orig_w=w, orig_h=h)


def pad_reflect(image: np.ndarray, target_w: int, target_h: int) -> np.ndarray:
    """Grow ``image`` to (target_h, target_w) by mirror reflection.

    The reflection does not repeat the edge pixel, so the padding amount per
    side must be smaller than the corresponding original dimension.
    """
    image = validate_raster(image)
    h, w = image.shape[:2]
    if target_h < h or target_w < w:
        raise ValueError("target dimensions smaller than the image")
    pad_h, pad_w = target_h - h, target_w - w
    if pad_h >= h or pad_w >= w:
        raise ValueError(
            f"padding ({pad_h}, {pad_w}) exceeds reflectable range for {h}x{w} image")
    if pad_h == 0 and pad_w == 0:
        return image
    return np.pad(image, ((0, pad_h), (0, pad_w), (0, 0)), mode="reflect")


def extract_block(image: np.ndarray, grid: BlockGrid, i: int) -> np.ndarray:
    """Copy block ``i`` out of an image at the grid's padded dimensions."""
    image = validate_raster(image)
    if image.shape[0] != grid.padded_h or image.shape[1] != grid.padded_w:
        raise ValueError(
            f"image is {image.shape[0]}x{image.shape[1]}, grid expects padded "
            f"{grid.padded_h}x{grid.padded_w}")
    y0, y1, x0, x1 = grid.block_rect(i)
    return image[y0:y1, x0:x1].copy()


def to_luma(image: np.ndarray) -> np.ndarray:
    """Full-range BT.601 luma plane, kept as float64."""
    image = validate_raster(image)
    return image.astype(np.float64) @ LUMA_WEIGHTS


def load_png(path) -> np.ndarray:
    """Read a PNG as an 8-bit RGB raster.

    Alpha is stripped; grayscale and palette images are promoted to RGB.
    16-bit images are rejected.
    """
    with Image.open(path) as img:
        if img.mode in ("I", "I;16", "I;16B", "I;16L", "I;16N", "F"):
            raise ValueError(f"{path}: 16-bit/float images are not supported")
        if img.mode != "RGB":
            img = img.convert("RGB")
        return np.asarray(img, dtype=np.uint8).copy()


def save_png(image: np.ndarray, path) -> None:
    """Write an 8-bit RGB raster as PNG."""
    image = validate_raster(image)
    Image.fromarray(image, mode="RGB").save(path, format="PNG")

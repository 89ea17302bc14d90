"""Separable polyphase resampling with classical kernels.

Both directions share one geometry convention: destination pixel ``j`` samples
the source at ``(j + 0.5) * ratio - 0.5`` (pixel centers aligned), where
``ratio`` is src/dst size.  Downscaling stretches the kernel by the factor so
the result is anti-aliased; upscaling interpolates with the kernel at unit
scale.  Taps falling outside the source clamp to the edge sample.

Weights for one output position are normalized to sum exactly to 1 (via
``math.fsum``), which makes constant inputs invariant and keeps mirrored
inputs producing mirrored outputs.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .image import validate_raster


def _bicubic_weight(x: np.ndarray) -> np.ndarray:
    # Keys cubic with a = -0.5 (Catmull-Rom)
    x = np.abs(x)
    out = np.zeros_like(x)
    near = x <= 1.0
    out[near] = ((1.5 * x[near] - 2.5) * x[near]) * x[near] + 1.0
    far = (x > 1.0) & (x < 2.0)
    out[far] = ((-0.5 * x[far] + 2.5) * x[far] - 4.0) * x[far] + 2.0
    return out


def _lanczos3_weight(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return np.where(np.abs(x) < 3.0, np.sinc(x) * np.sinc(x / 3.0), 0.0)


def _bilinear_weight(x: np.ndarray) -> np.ndarray:
    return np.maximum(0.0, 1.0 - np.abs(x))


def _box_weight(x: np.ndarray) -> np.ndarray:
    return np.where(np.abs(x) < 0.5, 1.0, 0.0)


@dataclass(frozen=True)
class Kernel:
    name: str
    support: float
    weight_fn: Callable[[np.ndarray], np.ndarray] = field(repr=False)


KERNELS = {
    "bicubic": Kernel("bicubic", 2.0, _bicubic_weight),
    "lanczos3": Kernel("lanczos3", 3.0, _lanczos3_weight),
    "bilinear": Kernel("bilinear", 1.0, _bilinear_weight),
    "box": Kernel("box", 0.5, _box_weight),
}


class ScalerRole(Enum):
    FINAL = "final"
    PROXY = "proxy"


@dataclass(frozen=True)
class Scaler:
    """A kernel bound to its role in the pipeline.

    ``final`` scalers produce the stored blocks and the reconstruction;
    ``proxy`` scalers are cheap stand-ins used only while scoring blocks
    for scale allocation.
    """

    kernel: Kernel
    role: ScalerRole = ScalerRole.FINAL


def make_scaler(kernel_name: str, role: str | ScalerRole = ScalerRole.FINAL) -> Scaler:
    if kernel_name not in KERNELS:
        raise ValueError(
            f"unknown kernel {kernel_name!r}; choose from {sorted(KERNELS)}")
    return Scaler(kernel=KERNELS[kernel_name], role=ScalerRole(role))


def kernel_weight(kernel: Kernel | str, x):
    """Evaluate a kernel (by object or name) at an offset or offset array."""
    if isinstance(kernel, str):
        if kernel not in KERNELS:
            raise ValueError(f"unknown kernel {kernel!r}")
        kernel = KERNELS[kernel]
    arr = np.asarray(x, dtype=np.float64)
    out = kernel.weight_fn(np.atleast_1d(arr))
    return float(out[0]) if arr.ndim == 0 else out


def _axis_weight_matrix(n_src: int, n_dst: int, kernel: Kernel) -> np.ndarray:
    """Dense (n_dst, n_src) weight matrix for one axis.

    The kernel footprint is widened by the shrink ratio when n_dst < n_src;
    out-of-range taps are clamped so their weight lands on the edge sample.
    """
    ratio = n_src / n_dst
    fscale = max(ratio, 1.0)
    support = kernel.support * fscale
    mat = np.zeros((n_dst, n_src), dtype=np.float64)
    for j in range(n_dst):
        center = (j + 0.5) * n_src / n_dst - 0.5
        lo = int(math.floor(center - support)) + 1
        hi = int(math.floor(center + support))
        taps = np.arange(lo, hi + 1)
        weights = kernel.weight_fn((taps - center) / fscale)
        total = math.fsum(weights)
        if total == 0.0:
            raise ValueError(f"kernel {kernel.name} has no support at position {j}")
        np.add.at(mat[j], np.clip(taps, 0, n_src - 1), weights / total)
    return mat


def _resample(image: np.ndarray, out_h: int, out_w: int, kernel: Kernel) -> np.ndarray:
    image = validate_raster(image)
    h, w = image.shape[:2]
    w_rows = _axis_weight_matrix(h, out_h, kernel)
    w_cols = _axis_weight_matrix(w, out_w, kernel)
    out = np.empty((out_h, out_w, 3), dtype=np.float64)
    for c in range(3):
        out[..., c] = w_rows @ image[..., c].astype(np.float64) @ w_cols.T
    # quantize once: round half up, clamp to the 8-bit range
    return np.clip(np.floor(out + 0.5), 0.0, 255.0).astype(np.uint8)


def downscale(block: np.ndarray, k: int, scaler: Scaler) -> np.ndarray:
    """Shrink a block by integer factor ``k`` with anti-aliasing."""
    block = validate_raster(block)
    if k < 1:
        raise ValueError(f"scale factor must be >= 1, got {k}")
    h, w = block.shape[:2]
    if h % k or w % k:
        raise ValueError(f"block {h}x{w} not divisible by factor {k}")
    return _resample(block, h // k, w // k, scaler.kernel)


def upscale(lr: np.ndarray, k: int, scaler: Scaler) -> np.ndarray:
    """Enlarge a block by integer factor ``k`` by interpolation."""
    lr = validate_raster(lr)
    if k < 1:
        raise ValueError(f"scale factor must be >= 1, got {k}")
    h, w = lr.shape[:2]
    return _resample(lr, h * k, w * k, scaler.kernel)

"""Deterministic synthetic test images.

The generators cover the content classes the allocator cares about: smooth
gradients (cheap to shrink), dense high-frequency texture (expensive), and
spatially homogeneous fillers (flat, noise).  Everything is seeded, so a
given (seed, size) pair always produces identical pixels.
"""

import numpy as np


def _to_u8(arr: np.ndarray) -> np.ndarray:
    return np.clip(np.floor(arr + 0.5), 0, 255).astype(np.uint8)


def flat_image(size: int = 512, value: int = 128) -> np.ndarray:
    return np.full((size, size, 3), value, dtype=np.uint8)


def noise_image(size: int = 512, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, size=(size, size, 3), dtype=np.uint8)


def gradient_image(size: int = 512, seed: int = 0) -> np.ndarray:
    """Smooth diagonal gradient with seeded corner colors."""
    rng = np.random.default_rng(seed)
    corners = rng.uniform(20, 235, size=(2, 2, 3))
    y = np.linspace(0.0, 1.0, size)[:, None, None]
    x = np.linspace(0.0, 1.0, size)[None, :, None]
    plane = (corners[0, 0] * (1 - y) * (1 - x) + corners[0, 1] * (1 - y) * x +
             corners[1, 0] * y * (1 - x) + corners[1, 1] * y * x)
    return _to_u8(plane)


def texture_field(size: int, seed: int, wavelength: float = 6.0,
                  amplitude: float = 90.0) -> np.ndarray:
    """High-frequency quasi-periodic luminance field in [-amplitude, amplitude].

    Built from a few sinusoid products near the requested wavelength plus a
    little broadband noise, so it survives a x2 shrink but not a x4 one.
    """
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    field = np.zeros((size, size))
    for _ in range(3):
        wl = wavelength * rng.uniform(0.85, 1.25)
        theta = rng.uniform(0, np.pi)
        phase = rng.uniform(0, 2 * np.pi)
        kx = 2 * np.pi * np.cos(theta) / wl
        ky = 2 * np.pi * np.sin(theta) / wl
        field += np.sin(kx * xx + ky * yy + phase)
    field /= 3.0
    field += rng.normal(0.0, 0.12, size=(size, size))
    return amplitude * field


def half_and_half_image(size: int = 512, seed: int = 0) -> np.ndarray:
    """One half grainy gradient, one half texture.

    The texture amplitude ramps across its half, so blocks range from barely
    textured to saturated; the split flips orientation based on the seed.
    The quiet half carries mild grain, which makes its blocks noise-limited:
    the coarse factors all reconstruct it about equally well, so demoting
    those blocks is nearly free.  A strip of the textured half carries a
    coarser wavelength that survives the middle factor but not the coarse
    one, so its blocks are expensive to demote yet gain little from
    promotion.
    """
    rng = np.random.default_rng(seed)
    base = gradient_image(size, seed=seed + 1).astype(np.float64)
    wl = rng.uniform(5.2, 6.6)
    fine = texture_field(size, seed=seed + 2, wavelength=wl, amplitude=1.0)
    mid = texture_field(size, seed=seed + 3, wavelength=wl * 2.8,
                        amplitude=1.0)
    grain = rng.normal(0.0, 2.5, size=(size, size))
    # a quarter strip of the textured half gets the coarser wavelength
    strip = size // 4
    tex = fine.copy()
    if seed % 2 == 0:
        tex[:strip] = mid[:strip]
    else:
        tex[:, :strip] = mid[:, :strip]
    # amplitude ramps from faint to strong across the textured half
    ramp = np.linspace(12.0, 110.0, size // 2)
    out = base + grain[..., None]
    if seed % 2 == 0:
        modulated = tex[:, size // 2:] * ramp[None, :]
        out[:, size // 2:, :] += modulated[..., None]
    else:
        modulated = tex[size // 2:, :] * ramp[:, None]
        out[size // 2:, :, :] += modulated[..., None]
    return _to_u8(out)


def heterogeneous_corpus(count: int = 20, size: int = 512,
                         seed: int = 1000) -> list[np.ndarray]:
    """The half-gradient / half-texture benchmark corpus."""
    return [half_and_half_image(size, seed=seed + i) for i in range(count)]


def homogeneous_corpus(count: int = 20, size: int = 512,
                       seed: int = 2000) -> list[np.ndarray]:
    """Spatially uniform difficulty: half pure noise, half flat gray."""
    images = []
    for i in range(count):
        if i % 2 == 0:
            images.append(noise_image(size, seed=seed + i))
        else:
            images.append(flat_image(size, value=40 + 9 * i))
    return images

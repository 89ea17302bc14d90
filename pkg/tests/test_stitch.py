import numpy as np
import pytest

from bbmr.image import partition
from bbmr.stitch import (_binomial_smooth, crop_to_original, edge_replace,
                         seam_filter, seam_index, stitch)


def _grid_and_blocks(h, w, block, fill=None, seed=0):
    img = np.zeros((h, w, 3), dtype=np.uint8)
    grid = partition(img, block, block, 8)
    rng = np.random.default_rng(seed)
    blocks = []
    for i in range(grid.n_blocks):
        if fill is None:
            blocks.append(rng.integers(0, 256, size=(block, block, 3),
                                       dtype=np.uint8))
        else:
            blocks.append(np.full((block, block, 3), fill, dtype=np.uint8))
    return grid, blocks


class TestStitch:
    def test_layout_row_major(self):
        grid, blocks = _grid_and_blocks(64, 128, 64)
        canvas = stitch(blocks, grid)
        assert canvas.raster.shape == (64, 128, 3)
        np.testing.assert_array_equal(canvas.raster[:, :64], blocks[0])
        np.testing.assert_array_equal(canvas.raster[:, 64:], blocks[1])

    def test_block_count_checked(self):
        grid, blocks = _grid_and_blocks(64, 128, 64)
        with pytest.raises(ValueError):
            stitch(blocks[:1], grid)

    def test_block_shape_checked(self):
        grid, blocks = _grid_and_blocks(64, 128, 64)
        blocks[1] = blocks[1][:32].copy()
        with pytest.raises(ValueError):
            stitch(blocks, grid)


class TestBinomialSmooth:
    def test_step_profile(self):
        """Hand-computed 5-tap binomial response to a 100/200 step."""
        step = np.zeros((1, 8, 3))
        step[:, :4] = 100.0
        step[:, 4:] = 200.0
        smoothed = _binomial_smooth(step)
        np.testing.assert_allclose(
            smoothed[0, :, 0],
            [100.0, 100.0, 106.25, 131.25, 168.75, 193.75, 200.0, 200.0])

    def test_constant_invariant(self):
        flat = np.full((6, 6, 3), 42.0)
        np.testing.assert_allclose(_binomial_smooth(flat), 42.0)

    def test_separable_symmetry(self):
        rng = np.random.default_rng(3)
        img = rng.uniform(0, 255, size=(16, 16, 3))
        a = _binomial_smooth(img[::-1, ::-1].copy())[::-1, ::-1]
        b = _binomial_smooth(img)
        np.testing.assert_allclose(a, b, atol=1e-9)


class TestSeamFilter:
    def test_interior_far_from_seams_untouched(self):
        grid, blocks = _grid_and_blocks(128, 128, 64)
        canvas = stitch(blocks, grid)
        filtered = seam_filter(canvas, radius=2)
        out = edge_replace(canvas, filtered)
        # regions away from both seam strips keep their exact bytes
        for sl in (np.s_[:30, :30], np.s_[:30, 98:], np.s_[98:, :30],
                   np.s_[98:, 98:]):
            np.testing.assert_array_equal(out[sl], canvas.raster[sl])

    def test_seam_rows_change(self):
        grid, blocks = _grid_and_blocks(128, 128, 64)
        canvas = stitch(blocks, grid)
        out = edge_replace(canvas, seam_filter(canvas, radius=2))
        assert np.any(out[62:66] != canvas.raster[62:66])

    def test_radius_validation(self):
        grid, blocks = _grid_and_blocks(128, 128, 64)
        canvas = stitch(blocks, grid)
        with pytest.raises(ValueError):
            seam_filter(canvas, radius=0)
        with pytest.raises(ValueError):
            seam_filter(canvas, radius=32)  # 2r must stay below the block

    def test_smooths_a_hard_block_boundary(self):
        grid, blocks = _grid_and_blocks(64, 128, 64, fill=100)
        blocks[1][:] = 200
        canvas = stitch(blocks, grid)
        out = edge_replace(canvas, seam_filter(canvas, radius=2))
        jump_before = int(canvas.raster[0, 64, 0]) - int(canvas.raster[0, 63, 0])
        jump_after = int(out[0, 64, 0]) - int(out[0, 63, 0])
        assert abs(jump_after) < abs(jump_before)

    def test_crop_to_original(self):
        grid, blocks = _grid_and_blocks(100, 100, 64)
        canvas = stitch(blocks, grid)
        assert canvas.raster.shape == (128, 128, 3)
        out = crop_to_original(canvas)
        assert out.shape == (100, 100, 3)


class TestSeamIndex:
    def test_single_block_convention(self):
        img = np.random.default_rng(4).integers(
            0, 256, size=(64, 64, 3), dtype=np.uint8)
        grid = partition(img, 64, 64, 8)
        assert seam_index(img, grid) == 1.0

    def test_flat_image_convention(self):
        img = np.full((128, 128, 3), 90, dtype=np.uint8)
        grid = partition(img, 64, 64, 8)
        assert seam_index(img, grid) == 1.0

    def test_blocky_image_scores_high(self):
        img = np.full((128, 128, 3), 80, dtype=np.uint8)
        img[:, 64:] = 160  # hard edge exactly on the block boundary
        img = (img + np.random.default_rng(5).integers(
            0, 6, size=img.shape)).astype(np.uint8)
        grid = partition(img, 64, 64, 8)
        assert seam_index(img, grid) > 3.0

    def test_seamless_image_scores_near_one(self):
        yy, xx = np.mgrid[0:128, 0:128]
        wave = 128 + 40 * np.sin(2 * np.pi * (xx + yy) / 23.0)
        img = np.clip(np.floor(wave + 0.5), 0, 255).astype(np.uint8)
        img = img[..., None].repeat(3, axis=2)
        grid = partition(img, 64, 64, 8)
        assert 0.5 < seam_index(img, grid) < 2.0

import numpy as np
import pytest

from bbmr.image import (BlockGrid, extract_block, load_png, pad_reflect,
                        partition, save_png, to_luma, validate_raster)


class TestValidateRaster:
    def test_accepts_rgb_u8(self, small_rgb):
        out = validate_raster(small_rgb)
        assert out is small_rgb

    def test_rejects_wrong_dtype(self):
        with pytest.raises(ValueError):
            validate_raster(np.zeros((4, 4, 3), dtype=np.float32))

    def test_rejects_wrong_channels(self):
        with pytest.raises(ValueError):
            validate_raster(np.zeros((4, 4), dtype=np.uint8))
        with pytest.raises(ValueError):
            validate_raster(np.zeros((4, 4, 4), dtype=np.uint8))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            validate_raster(np.zeros((0, 4, 3), dtype=np.uint8))


class TestPartition:
    def test_exact_fit(self):
        img = np.zeros((256, 384, 3), dtype=np.uint8)
        grid = partition(img, 128, 128, 8)
        assert (grid.rows, grid.cols) == (2, 3)
        assert grid.n_blocks == 6
        assert (grid.padded_h, grid.padded_w) == (256, 384)

    def test_ragged_fit_pads_up(self):
        img = np.zeros((200, 300, 3), dtype=np.uint8)
        grid = partition(img, 128, 128, 8)
        assert (grid.rows, grid.cols) == (2, 3)
        assert (grid.padded_h, grid.padded_w) == (256, 384)
        assert (grid.orig_h, grid.orig_w) == (200, 300)

    def test_block_must_divide_by_coarse_factor(self):
        img = np.zeros((100, 100, 3), dtype=np.uint8)
        with pytest.raises(ValueError):
            partition(img, 100, 100, 8)

    def test_block_rect_row_major(self):
        img = np.zeros((128, 256, 3), dtype=np.uint8)
        grid = partition(img, 64, 64, 8)
        assert grid.block_rect(0) == (0, 64, 0, 64)
        assert grid.block_rect(3) == (0, 64, 192, 256)
        assert grid.block_rect(4) == (64, 128, 0, 64)

    def test_block_rect_bounds(self):
        grid = BlockGrid(cols=2, rows=2, block_w=8, block_h=8,
                         orig_w=16, orig_h=16)
        with pytest.raises(IndexError):
            grid.block_rect(4)
        with pytest.raises(IndexError):
            grid.block_rect(-1)


class TestPadReflect:
    def test_identity_when_sized(self, small_rgb):
        out = pad_reflect(small_rgb, 64, 48)
        np.testing.assert_array_equal(out, small_rgb)

    def test_mirror_content(self):
        img = np.arange(4 * 3 * 3, dtype=np.uint8).reshape(4, 3, 3)
        out = pad_reflect(img, 5, 4)
        assert out.shape == (4, 5, 3)
        # reflection does not repeat the border column
        np.testing.assert_array_equal(out[:, 3], img[:, 1])
        np.testing.assert_array_equal(out[:, 4], img[:, 0])

    def test_padding_amount_limited(self):
        img = np.zeros((4, 4, 3), dtype=np.uint8)
        with pytest.raises(ValueError):
            pad_reflect(img, 8, 4)  # needs 4 extra columns, only 3 available

    def test_never_shrinks(self, small_rgb):
        with pytest.raises(ValueError):
            pad_reflect(small_rgb, 32, 48)


class TestExtractBlock:
    def test_contents_and_copy(self):
        img = np.random.default_rng(0).integers(
            0, 256, size=(128, 128, 3), dtype=np.uint8)
        grid = partition(img, 64, 64, 8)
        blk = extract_block(img, grid, 3)
        np.testing.assert_array_equal(blk, img[64:128, 64:128])
        blk[0, 0, 0] ^= 0xFF
        assert img[64, 64, 0] != blk[0, 0, 0]

    def test_requires_padded_dims(self):
        img = np.zeros((200, 200, 3), dtype=np.uint8)
        grid = partition(img, 128, 128, 8)
        with pytest.raises(ValueError):
            extract_block(img, grid, 0)  # not padded to 256x256 yet


class TestToLuma:
    def test_gray_weights_sum_to_one(self):
        img = np.full((4, 4, 3), 128, dtype=np.uint8)
        luma = to_luma(img)
        assert luma.shape == (4, 4)
        assert luma.dtype == np.float64
        np.testing.assert_allclose(luma, 128.0, atol=1e-9)

    def test_channel_weights(self):
        img = np.zeros((1, 3, 3), dtype=np.uint8)
        img[0, 0, 0] = 255  # pure red
        img[0, 1, 1] = 255  # pure green
        img[0, 2, 2] = 255  # pure blue
        luma = to_luma(img)
        np.testing.assert_allclose(
            luma[0], [0.299 * 255, 0.587 * 255, 0.114 * 255], atol=1e-9)


class TestPngIO:
    def test_roundtrip(self, tmp_path, small_rgb):
        path = tmp_path / "img.png"
        save_png(small_rgb, path)
        back = load_png(path)
        np.testing.assert_array_equal(back, small_rgb)

    def test_alpha_stripped(self, tmp_path):
        from PIL import Image
        rgba = np.random.default_rng(1).integers(
            0, 256, size=(8, 8, 4), dtype=np.uint8)
        path = tmp_path / "img.png"
        Image.fromarray(rgba, "RGBA").save(path)
        back = load_png(path)
        assert back.shape == (8, 8, 3)

    def test_grayscale_promoted(self, tmp_path):
        from PIL import Image
        gray = np.random.default_rng(2).integers(
            0, 256, size=(8, 8), dtype=np.uint8)
        path = tmp_path / "img.png"
        Image.fromarray(gray, "L").save(path)
        back = load_png(path)
        assert back.shape == (8, 8, 3)
        np.testing.assert_array_equal(back[..., 0], gray)

    def test_16_bit_rejected(self, tmp_path):
        from PIL import Image
        deep = np.zeros((8, 8), dtype=np.uint16)
        path = tmp_path / "deep.png"
        Image.fromarray(deep).save(path)
        with pytest.raises(ValueError):
            load_png(path)

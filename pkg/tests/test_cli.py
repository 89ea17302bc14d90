import json
import struct
import zlib

import pytest

from bbmr.cli import main
from bbmr.container import HEADER_SIZE
from bbmr.image import load_png, save_png
from bbmr.synthetic import half_and_half_image


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    save_png(half_and_half_image(256, seed=7), root / "mixed.png")
    assert main(["downscale", str(root / "mixed.png"),
                 str(root / "mixed.bbmr"), "--block", "64"]) == 0
    return root


def _recrc(data: bytes) -> bytes:
    """Recompute the trailing checksum after tampering with the body."""
    crc = zlib.crc32(data[HEADER_SIZE:-4]) & 0xFFFFFFFF
    return data[:-4] + struct.pack("<I", crc)


class TestHappyPaths:
    def test_downscale_output(self, workdir, capsys):
        data = (workdir / "mixed.bbmr").read_bytes()
        assert data[:4] == b"BBMR"
        assert main(["downscale", str(workdir / "mixed.png"),
                     str(workdir / "again.bbmr"), "--block", "64"]) == 0
        out = capsys.readouterr().out
        assert "trades=" in out and "again.bbmr" in out
        assert (workdir / "again.bbmr").read_bytes() == data

    def test_upscale(self, workdir, capsys):
        assert main(["upscale", str(workdir / "mixed.bbmr"),
                     str(workdir / "up.png")]) == 0
        assert "256x256" in capsys.readouterr().out
        assert load_png(workdir / "up.png").shape == (256, 256, 3)

    def test_roundtrip_report(self, workdir, capsys):
        report = workdir / "rt.json"
        assert main(["roundtrip", str(workdir / "mixed.png"),
                     str(workdir / "rt.png"), "--block", "64",
                     "--report", str(report)]) == 0
        assert "psnr=" in capsys.readouterr().out
        doc = json.loads(report.read_text())
        assert doc["psnr_db"] > 20.0
        assert sum(doc["plan_histogram"].values()) == 16

    def test_roundtrip_flags(self, workdir, capsys):
        assert main(["roundtrip", str(workdir / "mixed.png"),
                     str(workdir / "rt2.png"),
                     "--factors", "1,2,4", "--block", "128x64",
                     "--kernel", "lanczos3", "--no-deblock", "--t", "1.0"]) == 0
        assert "psnr=" in capsys.readouterr().out

    def test_inspect_json(self, workdir, capsys):
        assert main(["inspect", str(workdir / "mixed.bbmr"), "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["magic"] == "BBMR"
        assert doc["factors"] == [2, 4, 8]
        assert doc["width"] == doc["height"] == 256

    def test_inspect_text(self, workdir, capsys):
        assert main(["inspect", str(workdir / "mixed.bbmr")]) == 0
        assert "factors 2,4,8" in capsys.readouterr().out

    def test_bench_report_csv(self, workdir, capsys):
        report = workdir / "bench.json"
        csv_path = workdir / "bench.csv"
        assert main(["bench", str(workdir / "mixed.png"),
                     "--report", str(report), "--csv", str(csv_path)]) == 0
        assert "gain" in capsys.readouterr().out
        assert json.loads(report.read_text())["aggregate"]["count"] == 1
        assert csv_path.read_text().count("\n") == 2

    def test_bench_directory_argument(self, workdir, capsys):
        assert main(["bench", str(workdir)]) == 0
        assert "images" in capsys.readouterr().out


class TestConfigErrors:
    def test_missing_input(self, tmp_path, capsys):
        code = main(["downscale", str(tmp_path / "absent.png"),
                     str(tmp_path / "out.bbmr")])
        assert code == 2
        assert "no such file" in capsys.readouterr().err

    def test_missing_container(self, tmp_path, capsys):
        assert main(["upscale", str(tmp_path / "absent.bbmr"),
                     str(tmp_path / "out.png")]) == 2
        capsys.readouterr()

    def test_bad_factors_flag(self, workdir, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["downscale", str(workdir / "mixed.png"), "out.bbmr",
                  "--factors", "4,2,8"])
        assert exc.value.code == 2
        capsys.readouterr()

    def test_bad_block_flag(self, workdir, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["downscale", str(workdir / "mixed.png"), "out.bbmr",
                  "--block", "banana"])
        assert exc.value.code == 2
        capsys.readouterr()

    def test_block_not_divisible_by_factors(self, workdir, tmp_path, capsys):
        # 60 % 8 != 0, so no valid coarse representation exists
        code = main(["downscale", str(workdir / "mixed.png"),
                     str(tmp_path / "out.bbmr"), "--block", "60"])
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_bench_no_pngs(self, tmp_path, capsys):
        assert main(["bench", str(tmp_path)]) == 2
        assert "no PNG" in capsys.readouterr().err

    def test_unknown_kernel(self, workdir, tmp_path, capsys):
        assert main(["roundtrip", str(workdir / "mixed.png"),
                     str(tmp_path / "o.png"), "--kernel", "mystery"]) == 2
        assert "kernel" in capsys.readouterr().err


class TestImageErrors:
    def test_unreadable_png(self, tmp_path, capsys):
        bogus = tmp_path / "fake.png"
        bogus.write_bytes(b"this is not a png at all")
        assert main(["downscale", str(bogus),
                     str(tmp_path / "out.bbmr")]) == 3
        assert "cannot read" in capsys.readouterr().err


class TestContainerErrors:
    @pytest.fixture
    def container(self, workdir):
        return (workdir / "mixed.bbmr").read_bytes()

    def _run(self, tmp_path, data: bytes) -> int:
        path = tmp_path / "bad.bbmr"
        path.write_bytes(data)
        return main(["inspect", str(path)])

    def test_bad_magic(self, container, tmp_path, capsys):
        assert self._run(tmp_path, b"NOPE" + container[4:]) == 10
        capsys.readouterr()

    def test_bad_version(self, container, tmp_path, capsys):
        assert self._run(tmp_path,
                         container[:4] + b"\x09" + container[5:]) == 11
        capsys.readouterr()

    def test_truncated(self, container, tmp_path, capsys):
        assert self._run(tmp_path, container[:len(container) // 2]) == 12
        capsys.readouterr()

    def test_checksum(self, container, tmp_path, capsys):
        mid = len(container) // 2
        flipped = (container[:mid] + bytes([container[mid] ^ 0x40]) +
                   container[mid + 1:])
        assert self._run(tmp_path, flipped) == 13
        capsys.readouterr()

    def test_invalid_plan_code(self, container, tmp_path, capsys):
        # valid checksum over an out-of-range scale code
        bad = container[:HEADER_SIZE] + b"\x07" + container[HEADER_SIZE + 1:]
        assert self._run(tmp_path, _recrc(bad)) == 14
        capsys.readouterr()

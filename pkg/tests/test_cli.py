import xml.etree.ElementTree as ET

import numpy as np
import pytest

import polyseg as ps
from polyseg.cli import main

from helpers import blob_image


@pytest.fixture()
def disk_pgm(tmp_path):
    path = tmp_path / "disk.pgm"
    rc = main([
        "synth", "--kind", "disk", "--width", "120", "--height", "120",
        "--fg", "0.9", "--bg", "0.1", "--cx", "60", "--cy", "60", "--r", "35",
        "--out", str(path),
    ])
    assert rc == 0
    return path


@pytest.fixture()
def blob_pgm(tmp_path):
    path = tmp_path / "blob.pgm"
    ps.write_pnm(blob_image(), path)
    return path


def segment_args(disk_pgm, out_dir, extra=()):
    return [
        "segment", "--input", str(disk_pgm), "--init-circle", "60,60,52",
        "--eta", "5e-4", "--iters", "80", "--vertices", "60",
        "--seed", "1", "--out", str(out_dir), *extra,
    ]


class TestSynth:
    def test_writes_readable_pgm(self, disk_pgm):
        img = ps.read_pnm(disk_pgm)
        assert img.width == 120 and img.height == 120
        direct = ps.synth_shape(
            "disk", 120, 120, 0.9, 0.1, {"cx": 60, "cy": 60, "r": 35}
        )
        quant = np.round(direct.data * 255) / 255
        assert np.abs(img.data - quant).max() < 1e-12

    def test_noisy_deterministic(self, tmp_path):
        args = [
            "synth", "--kind", "disk", "--width", "40", "--height", "40",
            "--cx", "20", "--cy", "20", "--r", "12",
            "--noise-sd", "25", "--seed", "7",
        ]
        a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_oversize_exits_one(self, tmp_path):
        rc = main([
            "synth", "--kind", "disk", "--width", "40", "--height", "40",
            "--cx", "20", "--cy", "20", "--r", "30", "--out", str(tmp_path / "x.pgm"),
        ])
        assert rc == 1


class TestSegment:
    def test_outputs_and_exit_zero(self, disk_pgm, tmp_path):
        out = tmp_path / "run"
        rc = main(segment_args(disk_pgm, out, extra=["--snapshot-every", "20"]))
        assert rc == 0
        for name in ("trace.csv", "final_polygon.txt", "final_mask.pgm",
                     "overlay.svg", "energy.svg"):
            assert (out / name).exists(), name
        lines = (out / "trace.csv").read_text().splitlines()
        assert lines[0] == "iter,e1,e2,e3,total,area,perimeter,max_disp"
        assert len(lines) - 1 <= 80
        mask = ps.read_pnm(out / "final_mask.pgm")
        assert set(np.unique(mask.data)).issubset({0.0, 1.0})
        poly = ps.read_polygon(out / "final_polygon.txt")
        assert len(poly) == 60

    def test_overlay_svg_structure(self, disk_pgm, tmp_path):
        out = tmp_path / "run"
        rc = main(segment_args(disk_pgm, out, extra=["--snapshot-every", "20"]))
        assert rc == 0
        root = ET.parse(out / "overlay.svg").getroot()
        polylines = root.findall(".//{http://www.w3.org/2000/svg}polyline")
        snapshots = list(out.glob("snapshot_*.svg"))
        assert len(polylines) == len(snapshots) + 2  # initial + final
        for snap in snapshots:
            snap_root = ET.parse(snap).getroot()
            assert len(snap_root.findall(".//{http://www.w3.org/2000/svg}polyline")) == 1

    def test_reproducible_byte_identical(self, disk_pgm, tmp_path):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        assert main(segment_args(disk_pgm, out1)) == 0
        assert main(segment_args(disk_pgm, out2)) == 0
        assert (out1 / "trace.csv").read_bytes() == (out2 / "trace.csv").read_bytes()
        assert (out1 / "final_polygon.txt").read_bytes() == (out2 / "final_polygon.txt").read_bytes()

    def test_missing_input_exits_one(self, tmp_path):
        rc = main([
            "segment", "--input", str(tmp_path / "nope.pgm"),
            "--init-circle", "10,10,5", "--out", str(tmp_path / "o"),
        ])
        assert rc == 1

    def test_init_outside_image_exits_two(self, disk_pgm, tmp_path):
        rc = main([
            "segment", "--input", str(disk_pgm), "--init-circle", "500,500,30",
            "--out", str(tmp_path / "o"),
        ])
        assert rc == 2

    def test_usage_error_exits_one(self, disk_pgm, tmp_path):
        # both init specs at once
        rc = main([
            "segment", "--input", str(disk_pgm), "--init-circle", "10,10,5",
            "--init-poly", "x.txt", "--out", str(tmp_path / "o"),
        ])
        assert rc == 1

    def test_init_poly_file(self, disk_pgm, tmp_path):
        poly_path = tmp_path / "init.txt"
        ps.write_polygon(ps.init_circle((60, 60), 50, 40), poly_path)
        out = tmp_path / "run"
        rc = main([
            "segment", "--input", str(disk_pgm), "--init-poly", str(poly_path),
            "--eta", "5e-4", "--iters", "40", "--vertices", "40",
            "--out", str(out),
        ])
        assert rc == 0

    def test_lab_mode_requires_color(self, disk_pgm, tmp_path):
        rc = main([
            "segment", "--input", str(disk_pgm), "--mode", "lab",
            "--init-circle", "60,60,40", "--out", str(tmp_path / "o"),
        ])
        assert rc == 1

    def test_rgb_mode_runs(self, tmp_path):
        rgb = np.full((80, 80, 3), 0.2)
        rgb[20:60, 20:60, 0] = 0.9
        rgb[20:60, 20:60, 1] = 0.6
        path = tmp_path / "color.ppm"
        ps.write_pnm(ps.Image(rgb, ps.RGB), path)
        for mode in ("rgb", "lab"):
            out = tmp_path / f"run_{mode}"
            rc = main([
                "segment", "--input", str(path), "--mode", mode,
                "--init-circle", "40,40,32", "--eta", "5e-4",
                "--iters", "60", "--vertices", "50", "--out", str(out),
            ])
            assert rc == 0
            root = ET.parse(out / "overlay.svg").getroot()
            strokes = [el.get("stroke") for el in
                       root.findall(".//{http://www.w3.org/2000/svg}polyline")]
            assert strokes[-2:] == ["blue", "red"]  # color-mode styling


class TestGradcheck:
    def test_blob_passes(self, blob_pgm):
        rc = main([
            "gradcheck", "--input", str(blob_pgm),
            "--init-circle", "32,32,15", "--vertices", "40",
            "--eta", "1e-3",
        ])
        assert rc == 0

    def test_constant_image_passes(self, tmp_path):
        path = tmp_path / "const.pgm"
        ps.write_pnm(ps.Image(np.full((48, 48), 0.5), ps.GRAY), path)
        rc = main([
            "gradcheck", "--input", str(path),
            "--init-circle", "24,24,10", "--vertices", "30",
        ])
        assert rc == 0

    def test_negate_exits_three(self, blob_pgm):
        rc = main([
            "gradcheck", "--input", str(blob_pgm),
            "--init-circle", "32,32,15", "--vertices", "40",
            "--eta", "1e-3", "--negate",
        ])
        assert rc == 3

    def test_io_error_exits_one(self, tmp_path):
        rc = main([
            "gradcheck", "--input", str(tmp_path / "missing.pgm"),
            "--init-circle", "1,1,1",
        ])
        assert rc == 1

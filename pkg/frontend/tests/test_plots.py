"""Tests for the figure renderer.

All inputs are small hand-written files in the formats the kickedmix
runner emits, so these tests exercise the renderer end to end without
the physics package installed.
"""

import json

import numpy as np
import pytest

from kickedmix_plots import (
    PlotInputError,
    load_json_payload,
    load_sff_csv,
)
from kickedmix_plots.cli import EXIT_INPUT, EXIT_OK, main

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def write_sff_csv(path, L=4, scaled=True, t_max=40):
    t = np.arange(1, t_max + 1)
    K = 2.0 * t * (1.0 + 0.5 ** t) + 0.01 * L
    header = "t,K,K_over_2t"
    if scaled:
        header += ",t_scaled,K_scaled"
    lines = [header]
    scale = np.log(L)
    for ti, Ki in zip(t, K):
        row = [str(int(ti)), f"{Ki:.17g}", f"{Ki / (2 * ti):.17g}"]
        if scaled:
            row += [f"{ti / scale:.17g}", f"{Ki / scale:.17g}"]
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_points_json(path, n_points=5):
    points = [[n, 1.0 - 0.3 / n] for n in range(2, 2 + n_points)]
    path.write_text(json.dumps({"map": "full", "points": points}))
    return path


def write_extrapolation_json(path):
    points = [[n, 0.97 - 0.2 / n] for n in (4, 6, 8, 10)]
    payload = {
        "points": points,
        "slope": -0.2,
        "intercept": 0.97,
        "points_used": 3,
    }
    path.write_text(json.dumps(payload))
    return path


class TestLoaders:
    def test_sff_csv_roundtrip(self, tmp_path):
        path = write_sff_csv(tmp_path / "sff_exact_L4.csv")
        table = load_sff_csv(path)
        assert table.label == "sff_exact_L4"
        assert table.has_collapse
        assert len(table.t) == 40
        np.testing.assert_allclose(table.K_over_2t, table.K / (2 * table.t))

    def test_sff_csv_without_collapse(self, tmp_path):
        path = write_sff_csv(tmp_path / "s.csv", scaled=False)
        table = load_sff_csv(path)
        assert not table.has_collapse

    def test_missing_file_names_path(self, tmp_path):
        missing = tmp_path / "nope.csv"
        with pytest.raises(PlotInputError, match="nope.csv"):
            load_sff_csv(missing)

    def test_missing_column_named(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t,K\n1,2\n")
        with pytest.raises(PlotInputError, match="K_over_2t"):
            load_sff_csv(path)

    def test_non_numeric_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t,K,K_over_2t\n1,oops,1\n")
        with pytest.raises(PlotInputError, match="non-numeric"):
            load_sff_csv(path)

    def test_empty_csv_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("t,K,K_over_2t\n")
        with pytest.raises(PlotInputError, match="no data rows"):
            load_sff_csv(path)

    def test_json_missing_key_named(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps({"points": []}))
        with pytest.raises(PlotInputError, match="'slope'"):
            load_json_payload(path, required_keys=("points", "slope"))

    def test_json_invalid_rejected(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text("{not json")
        with pytest.raises(PlotInputError, match="invalid JSON"):
            load_json_payload(path, required_keys=())


class TestCli:
    @pytest.mark.parametrize("fmt", ["png", "svg"])
    def test_sff_panels_renders(self, tmp_path, fmt):
        inputs = [
            str(write_sff_csv(tmp_path / f"sff_rpa_L{L}.csv", L=L))
            for L in (4, 6, 8)
        ]
        out = tmp_path / f"panels.{fmt}"
        assert main(["SffPanels", "--inputs", *inputs, "--out", str(out)]) == EXIT_OK
        data = out.read_bytes()
        assert len(data) > 1000
        if fmt == "png":
            assert data.startswith(PNG_MAGIC)
        else:
            assert b"<svg" in data

    def test_sff_panels_requires_collapse_columns(self, tmp_path, capsys):
        path = write_sff_csv(tmp_path / "s.csv", scaled=False)
        out = tmp_path / "panels.png"
        code = main(["SffPanels", "--inputs", str(path), "--out", str(out)])
        assert code == EXIT_INPUT
        assert "t_scaled" in capsys.readouterr().err

    def test_overlay_renders(self, tmp_path):
        exact = write_sff_csv(tmp_path / "sff_exact_L6.csv", L=6)
        rpa = write_sff_csv(tmp_path / "sff_rpa_L6.csv", L=6)
        out = tmp_path / "overlay.png"
        code = main(
            ["ExactVsRpaOverlay", "--inputs", str(exact), str(rpa), "--out", str(out)]
        )
        assert code == EXIT_OK
        assert out.read_bytes().startswith(PNG_MAGIC)

    def test_overlay_needs_two_series(self, tmp_path, capsys):
        exact = write_sff_csv(tmp_path / "sff_exact_L6.csv", L=6)
        out = tmp_path / "overlay.png"
        code = main(["ExactVsRpaOverlay", "--inputs", str(exact), "--out", str(out)])
        assert code == EXIT_INPUT
        assert "two SFF series" in capsys.readouterr().err

    def test_lambda1_renders(self, tmp_path):
        payload = write_points_json(tmp_path / "lambda_across_N.json")
        out = tmp_path / "lambda.svg"
        code = main(["Lambda1VsL", "--inputs", str(payload), "--out", str(out)])
        assert code == EXIT_OK
        assert b"<svg" in out.read_bytes()

    def test_extrapolation_renders(self, tmp_path):
        payload = write_extrapolation_json(tmp_path / "extrapolation.json")
        out = tmp_path / "extrap.png"
        code = main(["ExtrapolationPlot", "--inputs", str(payload), "--out", str(out)])
        assert code == EXIT_OK
        assert out.read_bytes().startswith(PNG_MAGIC)

    def test_extrapolation_single_input_only(self, tmp_path, capsys):
        a = write_extrapolation_json(tmp_path / "a.json")
        b = write_extrapolation_json(tmp_path / "b.json")
        out = tmp_path / "extrap.png"
        code = main(
            ["ExtrapolationPlot", "--inputs", str(a), str(b), "--out", str(out)]
        )
        assert code == EXIT_INPUT
        assert "exactly one input" in capsys.readouterr().err

    def test_missing_input_exit_code(self, tmp_path, capsys):
        out = tmp_path / "x.png"
        code = main(
            ["Lambda1VsL", "--inputs", str(tmp_path / "gone.json"), "--out", str(out)]
        )
        assert code == EXIT_INPUT
        assert "gone.json" in capsys.readouterr().err

    def test_unsupported_format_rejected(self, tmp_path, capsys):
        payload = write_points_json(tmp_path / "p.json")
        out = tmp_path / "x.pdf"
        code = main(["Lambda1VsL", "--inputs", str(payload), "--out", str(out)])
        assert code == EXIT_INPUT
        assert ".pdf" in capsys.readouterr().err

    def test_unknown_kind_rejected(self, tmp_path):
        with pytest.raises(SystemExit) as excinfo:
            main(["Histogram", "--inputs", "a.csv", "--out", "x.png"])
        assert excinfo.value.code == 2


class TestDeterminism:
    @pytest.mark.parametrize("fmt", ["png", "svg"])
    def test_rerun_is_byte_identical(self, tmp_path, fmt):
        inputs = [
            str(write_sff_csv(tmp_path / f"sff_rpa_L{L}.csv", L=L))
            for L in (4, 8)
        ]
        out_a = tmp_path / f"a.{fmt}"
        out_b = tmp_path / f"b.{fmt}"
        assert main(["SffPanels", "--inputs", *inputs, "--out", str(out_a)]) == EXIT_OK
        assert main(["SffPanels", "--inputs", *inputs, "--out", str(out_b)]) == EXIT_OK
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_extrapolation_rerun_identical(self, tmp_path):
        payload = write_extrapolation_json(tmp_path / "extrapolation.json")
        outs = [tmp_path / "a.svg", tmp_path / "b.svg"]
        for out in outs:
            code = main(
                ["ExtrapolationPlot", "--inputs", str(payload), "--out", str(out)]
            )
            assert code == EXIT_OK
        assert outs[0].read_bytes() == outs[1].read_bytes()

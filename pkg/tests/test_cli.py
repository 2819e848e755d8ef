"""Manifest parsing, command dispatch, report determinism, exit codes."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from crhull import ManifestError
from crhull.cli import main, parse_manifest, serialize_manifest

MANIFESTS = Path(__file__).resolve().parent.parent / "manifests"


def minimal_manifest(**overrides):
    data = {
        "version": 1,
        "manifold": {
            "n": 2,
            "gamma": 1.0,
            "flat": False,
            "F": [],
            "f": [],
            "domain": {"T": 1.0, "R": 1.0},
        },
        "run": {},
    }
    data["manifold"].update(overrides)
    return json.dumps(data)


class TestParseManifest:
    def test_minimal_hyperbolic(self):
        m = parse_manifest(minimal_manifest())
        assert m.spec.n == 2 and m.spec.gamma == 1.0
        assert m.spec.F.is_zero()

    def test_order3_violation_rejected(self):
        bad = minimal_manifest(F=[{"a": [], "b": 1, "c": 1, "re": 1.0, "im": 0.0}])
        with pytest.raises(ManifestError, match="order-3 violation"):
            parse_manifest(bad)

    def test_schema_error_has_field_path(self):
        bad = minimal_manifest(F=[{"a": [], "c": 0, "re": 1.0}])
        with pytest.raises(ManifestError, match=r"manifold\.F\[0\]"):
            parse_manifest(bad)

    def test_open_example_fixture(self):
        # valid spec, hyperbolic, but certification must refuse it: it is
        # neither flat nor order-two-in-w
        text = (MANIFESTS / "open_example_m3.json").read_text()
        m = parse_manifest(text)
        assert m.spec.n == 3
        assert not m.spec.flat
        from crhull import order_two_in_w

        assert not order_two_in_w(m.spec.F)

    def test_not_json(self):
        with pytest.raises(ManifestError, match="not valid JSON"):
            parse_manifest("{")

    def test_roundtrip_canonical(self):
        text = (MANIFESTS / "flat_m3.json").read_text()
        m = parse_manifest(text)
        canon = serialize_manifest(m)
        again = serialize_manifest(parse_manifest(canon))
        assert canon == again


def run_cli(tmp_path, command, manifest_name, *extra):
    out = tmp_path / "report.json"
    code = main(
        [command, "--manifest", str(MANIFESTS / manifest_name), "--out", str(out), *extra]
    )
    return code, out.read_text()


class TestCommands:
    def test_certify_radius_matches_module(self, tmp_path):
        code, text = run_cli(tmp_path, "certify-radius", "hyperbolic_m2.json")
        assert code == 0
        report = json.loads(text)
        assert report["verdict"] == "certified"
        assert report["payload"]["r"] == pytest.approx(1.0 / 98304.0, rel=1e-9)

    def test_certify_flat_fixture(self, tmp_path):
        code, text = run_cli(tmp_path, "certify-flat", "flat_m3.json")
        assert code == 0
        payload = json.loads(text)["payload"]
        assert payload["T_star"] == 0.5
        assert payload["r_star"] == 2.0**-17

    def test_certify_flat_refuses_non_flat(self, tmp_path):
        code = main(
            [
                "certify-flat",
                "--manifest",
                str(MANIFESTS / "open_example_m3.json"),
                "--out",
                str(tmp_path / "r.json"),
            ]
        )
        assert code == 2

    def test_certify_flat_elliptic_origin_exit_1(self, tmp_path):
        manifest = tmp_path / "elliptic_flat.json"
        manifest.write_text(
            json.dumps(
                {
                    "version": 1,
                    "manifold": {
                        "n": 3,
                        "gamma": 0.25,
                        "flat": True,
                        "F": [],
                        "f": [[{"a": [2], "b": 0, "c": 0, "re": 1.0, "im": 0.0}]],
                        "domain": {"T": 0.5, "R": 1.0},
                    },
                    "run": {"t_count": 5},
                }
            )
        )
        out = tmp_path / "r.json"
        code = main(["certify-flat", "--manifest", str(manifest), "--out", str(out)])
        assert code == 1
        report = json.loads(out.read_text())
        assert report["verdict"] == "not-certified"
        assert any("non-hyperbolic origin" in d for d in report["payload"]["diagnostics"])

    def test_kallin_m3_on_order_two_fixture(self, tmp_path):
        code, text = run_cli(tmp_path, "kallin-m3", "order_two_m3.json")
        assert code == 0
        payload = json.loads(text)["payload"]
        assert payload["side1_min_margin"] >= 0
        assert payload["side2_min_margin"] >= 0
        assert payload["zero_fiber_ok"]

    def test_kallin_m3_refuses_open_example(self, tmp_path):
        code = main(
            [
                "kallin-m3",
                "--manifest",
                str(MANIFESTS / "open_example_m3.json"),
                "--out",
                str(tmp_path / "r.json"),
            ]
        )
        assert code == 2

    def test_classify_open_example_hyperbolic(self, tmp_path):
        code, text = run_cli(tmp_path, "classify", "open_example_m3.json")
        assert code == 0
        assert json.loads(text)["payload"]["kind"] == "hyperbolic"

    def test_hull_probe_always_evidence(self, tmp_path):
        code, text = run_cli(tmp_path, "hull-probe", "elliptic_m2.json", "--degree", "4")
        assert code == 0
        report = json.loads(text)
        assert report["verdict"] == "evidence-only"
        assert len(report["payload"]["results"]) == 3

    def test_locus_csv(self, tmp_path):
        csv_path = tmp_path / "locus.csv"
        code = main(
            [
                "locus",
                "--manifest",
                str(MANIFESTS / "flat_m3.json"),
                "--out",
                str(tmp_path / "r.json"),
                "--t-grid",
                "7",
                "--csv",
                str(csv_path),
            ]
        )
        assert code == 0
        rows = csv_path.read_text().strip().splitlines()
        assert rows[0] == "t1,re_eta,im_eta,converged"
        assert len(rows) == 8

    def test_missing_manifest_exit_2(self, tmp_path, capsys):
        assert main(["classify", "--manifest", str(tmp_path / "nope.json")]) == 2


class TestDeterminism:
    @pytest.mark.parametrize(
        "command,manifest,extra",
        [
            ("classify", "hyperbolic_m2.json", ()),
            ("locus", "flat_m3.json", ("--t-grid", "5")),
            ("normalform", "hyperbolic_m2.json", ()),
            ("certify-radius", "hyperbolic_m2.json", ()),
            ("certify-flat", "flat_m3.json", ("--t-grid", "5")),
            ("branches", "hyperbolic_m2.json", ("--seed", "7")),
            ("kallin-m2", "hyperbolic_m2.json", ()),
            ("kallin-m3", "order_two_m3.json", ("--t-grid", "5", "--grid", "8x8")),
            ("hull-probe", "elliptic_m2.json", ("--degree", "3")),
        ],
    )
    def test_reports_byte_identical(self, tmp_path, command, manifest, extra):
        _, first = run_cli(tmp_path, command, manifest, *extra)
        _, second = run_cli(tmp_path, command, manifest, *extra)
        assert first == second


def test_console_entry_point(tmp_path):
    result = subprocess.run(
        [
            sys.executable,
            "-m",
            "crhull.cli",
            "classify",
            "--manifest",
            str(MANIFESTS / "hyperbolic_m2.json"),
        ],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert json.loads(result.stdout)["verdict"] == "evidence-only"

import csv
import io
import json
import math
import subprocess
import sys

import pytest

from dyadicwalk import cli

BASE = [sys.executable, "-m", "dyadicwalk.cli"]


def run_cli(*args):
    return subprocess.run(BASE + list(args), capture_output=True, text=True)


def parse_csv(text):
    return list(csv.reader(io.StringIO(text)))


class TestCurve:
    def test_schema_and_range(self):
        r = run_cli("curve", "--which", "v", "--samples", "16", "--depth", "12")
        assert r.returncode == 0
        rows = parse_csv(r.stdout)
        assert rows[0] == ["x", "value"]
        assert len(rows) == 17
        for x, val in rows[1:]:
            assert -1.0 <= float(x) <= 1.0
            assert 1.0 <= float(val) <= 2.0  # v stays in [1, 1/(1-lam)]

    def test_u_at_lam_zero_is_zero(self):
        r = run_cli("--lambda", "0", "curve", "--which", "u", "--samples", "8", "--depth", "10")
        assert r.returncode == 0
        for _, val in parse_csv(r.stdout)[1:]:
            assert float(val) == 0.0

    def test_value_near_one_third(self):
        r = run_cli("curve", "--samples", "3", "--window", "0.3333", "0.3334", "--depth", "22")
        assert r.returncode == 0
        rows = parse_csv(r.stdout)[1:]
        mid = rows[1]
        assert float(mid[1]) - 1.0 == pytest.approx(1.0 / 3.0, abs=1e-3)

    def test_zoom_window(self):
        r = run_cli("curve", "--samples", "32", "--window", "0.25", "0.2500001", "--depth", "22")
        assert r.returncode == 0
        rows = parse_csv(r.stdout)[1:]
        xs = [float(x) for x, _ in rows]
        assert all(0.2499 < x < 0.2501 for x in xs)
        assert len(set(xs)) == len(xs)  # distinct cells

    def test_zoom_beyond_cap_is_resource_error(self):
        r = run_cli("curve", "--samples", "64", "--window", "0.25", "0.250000000000001")
        assert r.returncode == cli.EXIT_RESOURCE

    def test_too_few_samples_usage_error(self):
        r = run_cli("curve", "--samples", "1")
        assert r.returncode == cli.EXIT_USAGE


class TestMoments:
    def test_schema_and_golden_row(self):
        r = run_cli("moments", "--depth", "14", "--nmax", "2")
        assert r.returncode == 0
        rows = parse_csv(r.stdout)
        assert rows[0] == ["kind", "N", "closed_form", "alt_route", "oracle",
                           "oracle_bound", "abs_err"]
        by_key = {(row[0], row[1]): row for row in rows[1:]}
        v1 = by_key[("v_power", "1")]
        assert float(v1[2]) == pytest.approx(4.0 / math.sqrt(3.0), rel=1e-12)
        assert float(v1[6]) <= float(v1[5]) + 1e-8
        # odd moments are identically zero
        assert float(by_key[("v_moment", "1")][2]) == 0.0
        assert float(by_key[("u_moment", "1")][2]) == 0.0

    def test_u_routes_close(self):
        r = run_cli("moments", "--depth", "12", "--nmax", "4")
        rows = parse_csv(r.stdout)[1:]
        for row in rows:
            if row[0] == "u_moment" and row[3]:
                assert abs(float(row[2]) - float(row[3])) <= 1e-9

    def test_17_digit_serialization(self):
        r = run_cli("moments", "--depth", "10", "--nmax", "1")
        assert "2.3094010767585034" in r.stdout


class TestFourier:
    def test_two_sections(self):
        r = run_cli("fourier", "--harmonics", "4", "--samples", "8", "--depth", "14")
        assert r.returncode == 0
        rows = parse_csv(r.stdout)
        assert rows[0] == ["n", "coeff"]
        second = rows.index(["x", "reconstruction", "oracle"])
        assert second == 6  # header + 5 coefficient rows
        assert len(rows) - second - 1 == 8

    def test_c0_column(self):
        r = run_cli("fourier", "--harmonics", "1", "--samples", "2", "--depth", "12")
        rows = parse_csv(r.stdout)
        assert float(rows[1][1]) == pytest.approx(4.0 / math.sqrt(3.0), abs=1e-8)

    def test_lam_zero_coeffs(self):
        r = run_cli("--lambda", "0", "fourier", "--harmonics", "3", "--samples", "2",
                    "--depth", "10")
        rows = parse_csv(r.stdout)
        assert float(rows[1][1]) == pytest.approx(2.0, abs=1e-8)
        for n in (2, 3, 4):
            assert abs(float(rows[n][1])) < 1e-8

    def test_json_format(self):
        r = run_cli("fourier", "--harmonics", "2", "--samples", "4", "--depth", "10",
                    "--format", "json")
        doc = json.loads(r.stdout)
        assert set(doc) == {"lam", "coeffs", "samples"}
        assert len(doc["coeffs"]) == 3
        assert set(doc["samples"][0]) == {"x", "reconstruction", "oracle"}


class TestValidate:
    def test_default_passes(self):
        r = run_cli("validate", "--depth", "10", "--harmonics", "6", "--format", "json")
        assert r.returncode == 0
        doc = json.loads(r.stdout)
        assert doc["all_passed"] is True
        assert {e["identity_id"] for e in doc["entries"]} >= {
            "golden-v-power-1", "resolvent-roundtrip", "c-table-exact"}

    def test_injected_error_fails(self):
        r = run_cli("validate", "--depth", "10", "--harmonics", "6",
                    "--inject-error", "golden-u-moment-0")
        assert r.returncode == cli.EXIT_VALIDATION
        assert "golden-u-moment-0" in r.stderr

    def test_csv_format(self):
        r = run_cli("validate", "--depth", "10", "--harmonics", "6")
        rows = parse_csv(r.stdout)
        assert rows[0] == ["identity_id", "lhs_value", "rhs_value", "abs_error",
                           "allowed_bound", "pass"]
        assert all(row[5] == "true" for row in rows[1:])


class TestConfigAndExitCodes:
    def test_bad_lambda_usage_error(self):
        r = run_cli("--lambda", "1.0", "moments")
        assert r.returncode == cli.EXIT_USAGE

    def test_bad_tol_usage_error(self):
        r = run_cli("--tol", "0", "moments")
        assert r.returncode == cli.EXIT_USAGE

    def test_depth_budget_resource_error(self):
        r = run_cli("--depth", "30", "moments")
        assert r.returncode == cli.EXIT_RESOURCE

    def test_flags_after_subcommand(self):
        r = run_cli("moments", "--depth", "10", "--nmax", "1", "--lambda", "0.3")
        assert r.returncode == 0
        rows = parse_csv(r.stdout)
        assert float(rows[2][2]) == pytest.approx(2.0 / math.sqrt(1 - 0.09), rel=1e-12)

    def test_determinism(self):
        args = ("validate", "--depth", "9", "--harmonics", "4", "--seed", "5")
        a, b = run_cli(*args), run_cli(*args)
        assert a.stdout == b.stdout

    def test_unknown_command_usage(self):
        r = run_cli("frobnicate")
        assert r.returncode == cli.EXIT_USAGE

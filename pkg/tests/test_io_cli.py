import json
import os
import subprocess
import sys

import pytest

from segreode.cli import main
from segreode.io import (dumps_canonical, ode_from_json, ode_to_json,
                         parse_coeff_list, parse_monomial_expr, phi_from_json,
                         phi_to_json, Report, triseries_from_json,
                         triseries_to_json, ulaurent_from_json,
                         ulaurent_to_json, useries_from_json, useries_to_json)
from segreode.errors import DomainError, StructureError
from segreode.gauge import linear_family
from segreode.scalars import GaussRational
from segreode.segre import build_real, solve_phi
from segreode.series import ULaurent

from conftest import rnd_complex_series, rnd_structure_data


def test_series_json_roundtrip(rng):
    for _ in range(5):
        s = rnd_complex_series(rng, deg=6, trunc=10)
        assert useries_from_json(useries_to_json(s)) == s
    L = ULaurent(rnd_complex_series(rng, deg=5, trunc=9), 3)
    assert ulaurent_from_json(ulaurent_to_json(L)) == L


def test_ode_json_roundtrip(rng):
    ode = build_real(rnd_structure_data(rng))
    assert ode_from_json(ode_to_json(ode)) == ode


def test_phi_json_roundtrip(rng):
    ode = build_real(rnd_structure_data(rng, m=2))
    phi = solve_phi(ode, 2, 1, truncs=(4, 4, 8))
    back = phi_from_json(phi_to_json(phi))
    assert back.m == phi.m and back.sign == phi.sign
    assert back.phi == phi.phi


def test_triseries_json_roundtrip(rng):
    ode = build_real(rnd_structure_data(rng, m=1))
    phi = solve_phi(ode, 1, 1, truncs=(4, 4, 6))
    t = phi.family()
    assert triseries_from_json(triseries_to_json(t)) == t


def test_bad_records_raise():
    with pytest.raises(StructureError):
        useries_from_json({"var": "w"})
    with pytest.raises(StructureError):
        ode_from_json({"m": 1})


def test_report_invariants():
    with pytest.raises(StructureError):
        Report("x", "fail")
    r = Report("x", "pass", residual_order=3)
    assert "PASS" in r.line()


def test_parse_coeff_list():
    s = parse_coeff_list("1,0,-2/3,1+2i", trunc=8)
    assert s.coeff(0) == GaussRational(1)
    assert s.coeff(2) == GaussRational(0) - GaussRational(2) / 3
    assert s.coeff(3) == GaussRational(1, 2)
    with pytest.raises(DomainError):
        parse_coeff_list("1/0", trunc=8)


def test_parse_monomial_expr():
    L = parse_monomial_expr("2i*w^-4 + 3 - (1+2i)*w^2", trunc=12)
    assert L.coeff(-4) == GaussRational(0, 2)
    assert L.coeff(0) == GaussRational(3)
    assert L.coeff(2) == GaussRational(-1, -2)
    assert parse_monomial_expr("w", trunc=8).coeff(1) == GaussRational(1)
    assert parse_monomial_expr("-w^3", trunc=8).coeff(3) == GaussRational(-1)
    with pytest.raises(DomainError):
        parse_monomial_expr("w^x", trunc=8)


# -- CLI end-to-end ---------------------------------------------------------


def run_cli(args, **kw):
    return main(list(args))


def test_cli_build_and_verify(tmp_path, capsys):
    out = tmp_path / "ode.json"
    assert run_cli(["build", "--a", "1", "--b", "0,0,0,0,1", "--c", "0",
                    "--m", "4", "--trunc", "14", "-o", str(out)]) == 0
    ode = ode_from_json(json.loads(out.read_text()))
    assert ode == linear_family(1, trunc=14)
    assert run_cli(["verify", "p0", "--ode", str(out)]) == 0
    assert run_cli(["verify", "riccati", "--ode", str(out), "--p", "2i*w^-4"]) == 1
    capsys.readouterr()


def test_cli_invalid_inputs(tmp_path, capsys):
    assert run_cli(["build", "--a", "1/0", "--b", "0", "--m", "1"]) == 2
    assert run_cli(["build", "--a", "i", "--b", "0", "--m", "1"]) == 2
    assert run_cli(["build", "--a", "1", "--b", "0", "--m", "0"]) == 2
    assert run_cli(["verify", "p0", "--ode", str(tmp_path / "nope.json")]) == 2
    capsys.readouterr()


def test_cli_verify_json_stream(tmp_path, capsys):
    out = tmp_path / "ode.json"
    run_cli(["build", "--a", "1", "--b", "0", "--c", "0", "--m", "4",
             "--trunc", "12", "-o", str(out)])
    capsys.readouterr()
    assert run_cli(["verify", "riccati", "--ode", str(out), "--p", "2i*w^-4",
                    "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload[0]["status"] == "pass"
    assert payload[0]["claim"] == "log-derivative-witness"


def test_cli_divergence_and_monodromy(capsys):
    assert run_cli(["verify", "divergence", "--gamma", "1", "-K", "60"]) == 0
    assert run_cli(["verify", "monodromy", "--gamma", "5"]) == 0
    assert run_cli(["verify", "divergence", "--gamma", "0"]) == 2
    capsys.readouterr()


def test_cli_pipeline_deterministic(tmp_path, capsys):
    d1, d2 = tmp_path / "run1", tmp_path / "run2"
    args = ["pipeline", "--a", "1", "--b", "0,0,0,0,1", "--c", "0",
            "--m", "4", "--trunc", "10", "--dz", "4"]
    assert run_cli(args + ["--out-dir", str(d1)]) == 0
    assert run_cli(args + ["--out-dir", str(d2)]) == 0
    capsys.readouterr()
    for name in ("ode.json", "family.json", "hypersurface.json", "reports.json"):
        assert (d1 / name).read_bytes() == (d2 / name).read_bytes()
    manifest = json.loads((d1 / "manifest.json").read_text())
    assert manifest["reports"]["failed"] == 0
    assert set(manifest["artifacts"]) >= {"ode.json", "family.json",
                                          "hypersurface.json", "reports.json"}


def test_cli_pipeline_gamma_zero_vs_one_differ_in_E(tmp_path, capsys):
    d0, d1 = tmp_path / "g0", tmp_path / "g1"
    base = ["pipeline", "--a", "1", "--c", "0", "--m", "4", "--trunc", "10",
            "--dz", "4"]
    assert run_cli(base + ["--b", "0", "--out-dir", str(d0)]) == 0
    assert run_cli(base + ["--b", "0,0,0,0,1", "--out-dir", str(d1)]) == 0
    capsys.readouterr()
    o0 = json.loads((d0 / "ode.json").read_text())
    o1 = json.loads((d1 / "ode.json").read_text())
    assert o0["E"] != o1["E"]
    for name in "ABCDF":
        assert o0[name] == o1[name]


def test_cli_entrypoint_subprocess(tmp_path):
    env = dict(os.environ, SEGREODE_TRUNC="12")
    proc = subprocess.run(
        [sys.executable, "-m", "segreode.cli", "verify", "divergence",
         "--gamma", "1", "-K", "60"], capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert "PASS" in proc.stdout


def test_field_and_linsystem_json_roundtrip():
    from segreode.hypersurface import sphere_pushforward_fields
    from segreode.io import (field_from_json, field_to_json,
                             linsystem_from_json, linsystem_to_json)
    from segreode.gauge import to_system

    for X in sphere_pushforward_fields():
        back = field_from_json(field_to_json(X))
        assert back.fz == X.fz and back.fw == X.fw
    sys_ = to_system(linear_family(1, trunc=12))
    back = linsystem_from_json(linsystem_to_json(sys_))
    assert back.pole == sys_.pole and back.A == sys_.A


def test_cli_tangency_custom_field(tmp_path, capsys):
    from segreode.hypersurface import sphere_pushforward_fields
    from segreode.io import dumps_canonical, field_to_json

    path = tmp_path / "field.json"
    path.write_text(dumps_canonical(field_to_json(sphere_pushforward_fields()[0])))
    assert run_cli(["verify", "tangency", "--field", str(path),
                    "--dz", "5", "--trunc", "10"]) == 0
    capsys.readouterr()

import json
from pathlib import Path

import pytest

from logcomp.cli import (EXIT_INPUT, EXIT_INTERNAL, EXIT_MISMATCH, EXIT_OK, CatalogEntry, RunConfig,
                         StageError, cache_key, default_catalog_path, main, read_catalog, run_catalog,
                         run_single)
from logcomp.golden import SURFACE_BASIS, SURFACE_FACTS, SURFACE_VARS, surface_divisor
from logcomp.parsing import parse_poly
from logcomp.report import CurveReport, parse_report, report_emit

from oracles import sympy_contains
from logcomp.polyring import partial_derivative


def curve(src):
    return parse_poly(src, ("x", "y"))


@pytest.fixture(scope="module")
def surface_report():
    return run_single(surface_divisor(), RunConfig(), "surface", SURFACE_BASIS, SURFACE_FACTS, "h")


@pytest.fixture(scope="module")
def cusp_report():
    return run_single(curve("x^2 - y^3"), RunConfig(), "cusp")


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(kmax=0)
    with pytest.raises(ValueError):
        RunConfig(degree_bound=-1)
    with pytest.raises(ValueError):
        RunConfig(order="weird")


def test_cusp_report(cusp_report):
    r = cusp_report
    assert r.qh["quasi_homogeneous"] and r.duality["equal"] and r.lct["label"] == "holds"
    assert r.qh["unit_cofactor_witness"] == {"index": 0, "cofactor": "6"}
    assert "unit cofactor a1 = 6" in report_emit(r)


def test_non_qh_report():
    r = run_single(curve("x^4 + y^5 + x*y^4"), RunConfig())
    assert not r.qh["quasi_homogeneous"] and r.lct["holds"] is False
    assert r.ext2["first_unsolvable"] is not None and r.ext2["first_unsolvable"] <= 10


def test_surface_text(surface_report):
    text = report_emit(surface_report, "text")
    for line in ("δ1(h) = 4 h", "δ2(h) = x h", "δ3(h) = (2 x - 3 y) h", "[δ1, δ2] = δ2",
                 "[δ2, δ3] = -x δ2", "s3 = x dx + y dy - 2"):
        assert line in text
    order = ["Saito basis", "cofactors:", "brackets:", "syzygies:", "duality:", "gr^F:", "logarithmic comparison:"]
    pos = [text.index(k) for k in order]
    assert pos == sorted(pos)
    assert "(4*s+5)" not in text and "(4 s+5)" in text


def test_surface_report_content(surface_report):
    r = surface_report
    assert r.basis["unit"] == "1"
    assert r.resolution["last_syzygy"] == ["x^2*dx - y^2*dy - x*z*dz - y*z*dz - x", "-x*z*dz - y*dz",
                                           "x*dx + y*dy - 2"]
    assert r.duality["equal"] and not r.grF["regular"]
    assert r.lct["label"] == "asserted, verified modulo Ann-equality"


def test_structured_roundtrip(surface_report, cusp_report):
    for r in (surface_report, cusp_report):
        text = report_emit(r, "structured")
        assert parse_report(text) == r
        assert report_emit(parse_report(text), "structured") == text
        assert json.loads(text)["schema_version"] == 1


def test_report_rejects_unknown_schema(cusp_report):
    d = cusp_report.to_dict()
    d["schema_version"] = 99
    with pytest.raises(ValueError):
        CurveReport.from_dict(d)


def test_deterministic(cusp_report):
    again = run_single(curve("x^2 - y^3"), RunConfig(), "cusp")
    assert report_emit(again, "structured") == report_emit(cusp_report, "structured")


def test_stage_labels():
    with pytest.raises(StageError) as e:
        run_single(curve("x^2*y^2"), RunConfig())
    assert e.value.stage == "derlog" and e.value.exit_code == EXIT_INPUT
    with pytest.raises(StageError) as e:
        run_single(curve("x^2 - y^2 + x^3"), RunConfig())
    assert e.value.stage == "qh" and e.value.exit_code == EXIT_INTERNAL
    with pytest.raises(StageError):
        run_single(parse_poly("x", ("x",)), RunConfig())


def test_catalog_entry_validation():
    e = CatalogEntry.from_record({"name": "c", "vars": "x,y", "f": "x^2 - y^3", "expect_lct": "holds"})
    assert e.vars == ("x", "y") and e.expect_lct is True
    for bad in ({"f": "x y"}, {"f": "x^2"}, {"name": "a"}, {"f": "x*y", "expect_qh": "yes"}, {"f": "x*y", "zz": 1}):
        with pytest.raises(ValueError):
            CatalogEntry.from_record(bad)


def test_default_catalog_expectations_match_oracle():
    entries, warnings = read_catalog(default_catalog_path())
    assert not warnings and len([e for e in entries if len(e.vars) == 2]) >= 10
    for e in entries:
        f = parse_poly(e.f, e.vars)
        jac = [partial_derivative(f, i) for i in range(len(e.vars))]
        assert e.expect_qh == sympy_contains(f, jac), e.name


def test_default_catalog_runs(tmp_path):
    summary = run_catalog(default_catalog_path(), RunConfig(), jobs=2, out_dir=tmp_path)
    assert summary["exit_code"] == EXIT_OK and summary["skipped"] == 0
    assert all(r["status"] == "ok" for r in summary["entries"])
    assert (tmp_path / "summary.json").exists() and (tmp_path / "cusp.json").exists()


def test_empty_and_malformed(tmp_path):
    p = tmp_path / "empty.jsonl"
    p.write_text("")
    s = run_catalog(p)
    assert s["entries"] == [] and s["exit_code"] == EXIT_OK
    p = tmp_path / "bad.jsonl"
    p.write_text('{"name": "cusp", "f": "x^2 - y^3", "expect_qh": true}\n{"name": "broken", "f": "x +"}\n# note\n')
    s = run_catalog(p)
    assert s["skipped"] == 1 and s["processed"] == 1 and s["exit_code"] == EXIT_OK


def test_mismatch_exit(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text('{"name": "cusp", "vars": ["x", "y"], "f": "x^2 - y^3", "expect_lct": "fails"}\n')
    assert run_catalog(p)["exit_code"] == EXIT_MISMATCH
    assert main(["catalog", "--path", str(p)]) == EXIT_MISMATCH


def test_cache_byte_identical(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text('{"name": "cusp", "vars": ["x", "y"], "f": "x^2 - y^3"}\n'
                 '{"name": "also-cusp", "vars": ["x", "y"], "f": "-(y^3) + x*x"}\n')
    cfg = RunConfig(cache_dir=str(tmp_path / "cache"))
    fresh = tmp_path / "fresh"
    cached = tmp_path / "cached"
    s1 = run_catalog(p, cfg, out_dir=fresh)
    s2 = run_catalog(p, cfg, out_dir=cached)
    assert [r["cached"] for r in s1["entries"]] == [False, True]
    assert all(r["cached"] for r in s2["entries"])
    assert len(list((tmp_path / "cache").glob("*.json"))) == 1
    for name in ("cusp.json", "also-cusp.json"):
        assert (fresh / name).read_bytes() == (cached / name).read_bytes()


def test_cache_key_canonical():
    a = CatalogEntry.from_record({"vars": ["x", "y"], "f": "x^2 - y^3"})
    b = CatalogEntry.from_record({"vars": ["x", "y"], "f": "x*x - y*y^2"})
    assert cache_key(a, RunConfig()) == cache_key(b, RunConfig())
    assert cache_key(a, RunConfig()) != cache_key(a, RunConfig(kmax=5))


def test_main_exit_codes(capsys):
    assert main(["run", "--f", "x^2 - y^3"]) == EXIT_OK
    assert "logarithmic comparison: holds" in capsys.readouterr().out
    assert main(["run", "--f", "x y"]) == EXIT_INPUT
    assert main(["run", "--f", "x^2*y"]) == EXIT_INPUT
    assert main(["run", "--f", "x^2 - y^3", "--kmax", "0"]) == EXIT_INPUT
    assert main(["catalog", "--path", "/nonexistent/catalog.jsonl"]) == EXIT_INPUT
    assert main(["run", "--f", "x^3*y + x*y^3 + x^2*y^3"]) == EXIT_INTERNAL
    assert main(["run", "--f", "x^2 - y^3", "--format", "structured"]) == EXIT_OK
    assert parse_report(capsys.readouterr().out).name == "-y^3 + x^2"


def test_verify_paper(capsys):
    assert main(["verify-paper"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out

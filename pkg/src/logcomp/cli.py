"""Command line entry point: single runs, cached catalog runs and the golden suite.

Exit codes: 0 all expectations met, 1 verdict mismatch, 2 input error,
3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .dmodcheck import (InconsistentReport, annihilator_containment, duality_check, ext2_jet_probe,
                        grF_analysis, lct_verdict, resolution_check)
from .logder import (DivisorError, QHInconsistency, SaitoBasis, SaitoBasisNotFound, basis_from_fields,
                     bracket_decompose, check_divisor, derlog_generators, qh_test, saito_basis)
from .parsing import ParseError, infer_variables, parse_operator, parse_poly
from .polyring import Poly, order_named
from .report import CurveReport, combination_text, report_emit, times_symbol

log = logging.getLogger("logcomp")

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class StageError(RuntimeError):
    """A pipeline failure tagged with the stage that raised it."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause

    @property
    def exit_code(self) -> int:
        if isinstance(self.cause, (ParseError, DivisorError, SaitoBasisNotFound, ValueError)) \
                and not isinstance(self.cause, (InconsistentReport, QHInconsistency)):
            return EXIT_INPUT
        return EXIT_INTERNAL


@dataclass(frozen=True)
class RunConfig:
    order: str = "grevlex"
    kmax: int = 10
    degree_bound: int = 2
    format: str = "text"
    cache_dir: Optional[str] = None

    def __post_init__(self):
        if self.kmax < 1:
            raise ValueError("kmax must be at least 1")
        if self.degree_bound < 0:
            raise ValueError("degree bound must be non-negative")
        if self.format not in ("text", "structured"):
            raise ValueError(f"unknown format {self.format!r}")
        order_named(self.order)

    def identity(self) -> Dict[str, Any]:
        """The fields that affect the computed report."""
        return {"order": self.order, "kmax": self.kmax, "degree_bound": self.degree_bound}


@dataclass
class CatalogEntry:
    name: str
    vars: Tuple[str, ...]
    f: str
    expect_qh: Optional[bool] = None
    expect_lct: Optional[bool] = None
    basis: Optional[Tuple[str, ...]] = None
    facts: Dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_record(cls, rec: Dict[str, Any]) -> "CatalogEntry":
        if not isinstance(rec, dict):
            raise ValueError("entry is not an object")
        extra = set(rec) - {"name", "vars", "f", "expect_qh", "expect_lct", "basis", "facts"}
        if extra:
            raise ValueError(f"unknown fields {sorted(extra)}")
        if not isinstance(rec.get("f"), str):
            raise ValueError("missing divisor expression 'f'")
        vs = rec.get("vars")
        if isinstance(vs, str):
            vs = [v.strip() for v in vs.split(",") if v.strip()]
        vs = tuple(vs) if vs else infer_variables(rec["f"])
        lct = rec.get("expect_lct")
        if isinstance(lct, str):
            if lct not in ("holds", "fails"):
                raise ValueError(f"expect_lct must be holds/fails, got {lct!r}")
            lct = lct == "holds"
        for k, v in (("expect_qh", rec.get("expect_qh")), ("expect_lct", lct)):
            if v is not None and not isinstance(v, bool):
                raise ValueError(f"{k} must be a boolean")
        basis = rec.get("basis")
        entry = cls(str(rec.get("name") or rec["f"]), vs, rec["f"], rec.get("expect_qh"), lct,
                    tuple(basis) if basis else None, dict(rec.get("facts") or {}))
        f = parse_poly(entry.f, entry.vars)
        check_divisor(f)
        if entry.basis is not None:
            for b in entry.basis:
                parse_operator(b, entry.vars)
        return entry


# ---------------------------------------------------------------- single run

def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except StageError:
        raise
    except (ArithmeticError, ValueError, RuntimeError, AssertionError) as e:
        raise StageError(name, e) from e


def _s(v) -> str:
    return v.to_str("*")


def run_single(f: Poly, config: RunConfig = RunConfig(), name: Optional[str] = None,
               basis_hint: Optional[Sequence] = None, facts: Optional[Dict[str, str]] = None,
               symbol: str = "f") -> CurveReport:
    """Full pipeline for one divisor in 2 or 3 variables.

    ``basis_hint`` supplies vector fields (operators or strings) to use as the
    Saito basis; they are validated and checked to span Der(log f).
    """
    t0 = time.perf_counter()
    n = f.ring.nvars
    if n not in (2, 3):
        raise StageError("input", ValueError(f"only 2 or 3 variables are supported, got {n}"))
    order = order_named(config.order)
    gens = _stage("derlog", derlog_generators, f, order)
    if basis_hint:
        fields_ = [parse_operator(b, f.ring.names) if isinstance(b, str) else b for b in basis_hint]
        basis = _stage("saito", basis_from_fields, fields_, f)
        source = "supplied"
    else:
        basis = _stage("saito", saito_basis, gens, f, config.degree_bound)
        source = "computed"
    st = _stage("brackets", bracket_decompose, basis)
    qh = _stage("qh", qh_test, basis.derivations, f)
    containment = _stage("ideals", annihilator_containment, basis)
    res = _stage("resolution", resolution_check, basis, st, order)
    last = None
    if n == 3:
        if len(res.second_syzygies) != 1:
            raise StageError("resolution", InconsistentReport(
                f"expected one second syzygy generator, got {len(res.second_syzygies)}"))
        last = res.second_syzygies[0]
    du = _stage("duality", duality_check, basis, st, order, last)
    gr = _stage("grF", grF_analysis, basis)
    probe = _stage("ext2", ext2_jet_probe, basis, st, config.kmax) if n == 2 else None
    verdict = _stage("verdict", lct_verdict, n, qh, du, res, gr, containment, probe)

    names = [f"δ{i}" for i in range(1, n + 1)]
    report = CurveReport(
        name=name or _s(f),
        divisor={"expr": _s(f), "symbol": symbol, "variables": list(f.ring.names)},
        config=config.identity(),
        basis=_basis_dict(basis, source, symbol),
        brackets=[{"pair": [i + 1, j + 1], "alpha": [_s(a) for a in al],
                   "text": f"[{names[i]}, {names[j]}] = {combination_text(al, names)}"}
                  for (i, j), al in sorted(st.alpha.items())],
        qh={"quasi_homogeneous": qh.quasi_homogeneous,
            "unit_cofactor_witness": None if qh.unit_witness is None else
            {"index": qh.unit_witness, "cofactor": _s(basis.cofactors[qh.unit_witness])},
            "jacobian_member": qh.jacobian_member},
        resolution=_resolution_dict(res),
        duality={"equal": du.equal, "transposed": [_s(t) for t in du.transposed],
                 "gb_transposed": du.gb_transposed, "gb_tilde": du.gb_tilde,
                 "identities": dict(du.identities)},
        grF={"symbols": [_s(s) for s in gr.symbols], "regular": gr.regular,
             "failing_index": gr.failing_index,
             "witness": None if gr.witness is None else _s(gr.witness),
             "symbol_ideals_equal": gr.symbol_ideals_equal},
        containment=containment,
        ext2=None if probe is None else {"solvable": {str(k): v for k, v in probe.solvable.items()},
                                         "first_unsolvable": probe.first_unsolvable,
                                         "kmax": config.kmax},
        lct={"holds": verdict.holds, "label": verdict.label, "checks": dict(verdict.checks)},
        engine_version=__version__,
        facts=dict(facts or {}),
    )
    report.timing = time.perf_counter() - t0
    return report


def _basis_dict(basis: SaitoBasis, source: str, symbol: str) -> Dict[str, Any]:
    n = basis.n
    ders = []
    for d in basis.derivations:
        terms = [[list(e[:n]), list(e[n:]), str(c)] for e, c in d.delta.sorted_terms()]
        ders.append({"delta": _s(d.delta), "cofactor": _s(d.cofactor),
                     "cofactor_text": times_symbol(d.cofactor, symbol), "terms": terms})
    return {"source": source, "unit": str(basis.unit), "derivations": ders}


def _resolution_dict(res) -> Dict[str, Any]:
    out: Dict[str, Any] = {"n": res.n, "symbols_equal": res.symbols_equal,
                           "symbols_regular": res.symbols_regular, "residues": dict(res.residues)}
    if res.n == 2:
        out["phi_composition_zero"] = res.phi_composition_zero
        out["psi_composition_zero"] = res.psi_composition_zero
        out["relations"] = []
        out["second_syzygies"] = []
        out["last_syzygy"] = [_s(p) for p in res.psi2.rows[0]]
        out["twisted_last_syzygy"] = [_s(p) for p in res.phi2.rows[0]]
    else:
        out["relations"] = [[_s(p) for p in r] for r in res.relations]
        out["relations_are_syzygies"] = res.relations_are_syzygies
        out["relations_generate_first_syzygies"] = res.relations_generate_first_syzygies
        out["second_syzygies"] = [[_s(p) for p in s] for s in res.second_syzygies]
        out["second_composition_zero"] = res.second_composition_zero
        out["last_syzygy"] = out["second_syzygies"][0] if len(res.second_syzygies) == 1 else []
    return out


# ---------------------------------------------------------------- catalog

def default_catalog_path() -> Path:
    return Path(str(resources.files("logcomp") / "data" / "default_catalog.jsonl"))


def read_catalog(path) -> Tuple[List[CatalogEntry], List[str]]:
    """Entries plus warnings for skipped records; blank and ``#`` lines are ignored."""
    text = Path(path).read_text(encoding="utf-8")
    entries, warnings = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            entries.append(CatalogEntry.from_record(json.loads(line)))
        except (ValueError, ArithmeticError) as e:
            warnings.append(f"line {lineno}: skipped malformed entry: {e}")
    return entries, warnings


def cache_key(entry: CatalogEntry, config: RunConfig) -> str:
    f = parse_poly(entry.f, entry.vars)
    hint = None if entry.basis is None else [parse_operator(b, entry.vars).to_str("*") for b in entry.basis]
    ident = {"divisor": f.to_str("*"), "variables": list(entry.vars), "config": config.identity(),
             "basis": hint, "engine": __version__}
    return hashlib.sha256(json.dumps(ident, sort_keys=True).encode()).hexdigest()


def _atomic_write(path: Path, data: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _process_entry(entry: CatalogEntry, config: RunConfig) -> Dict[str, Any]:
    """Worker: returns the structured report text or an error record."""
    cache_file = None
    if config.cache_dir:
        cache_file = Path(config.cache_dir) / f"{cache_key(entry, config)}.json"
        if cache_file.exists():
            rep = CurveReport.from_dict(json.loads(cache_file.read_text(encoding="utf-8")))
            rep.name, rep.facts = entry.name, dict(entry.facts)
            return {"report": report_emit(rep, "structured"), "cached": True}
    symbol = "h" if len(entry.vars) == 3 else "f"
    try:
        rep = run_single(parse_poly(entry.f, entry.vars), config, entry.name, entry.basis,
                         entry.facts, symbol)
    except StageError as e:
        return {"error": str(e), "exit_code": e.exit_code}
    text = report_emit(rep, "structured")
    if cache_file is not None:
        _atomic_write(cache_file, text)
    return {"report": text, "cached": False}


def run_catalog(path, config: RunConfig = RunConfig(), jobs: int = 1,
                out_dir=None) -> Dict[str, Any]:
    """Run every catalog entry and compare with its expected verdicts.

    Returns a summary with per-entry rows and the overall ``exit_code``.
    """
    entries, warnings = read_catalog(path)
    for w in warnings:
        log.warning(w)
    if jobs > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_process_entry, entries, [config] * len(entries)))
    else:
        results = [_process_entry(e, config) for e in entries]
    rows, exit_code = [], EXIT_OK
    for entry, res in zip(entries, results):
        row: Dict[str, Any] = {"name": entry.name, "f": entry.f,
                               "expect_qh": entry.expect_qh, "expect_lct": entry.expect_lct}
        if "error" in res:
            row.update(status="error", error=res["error"])
            exit_code = max(exit_code, res["exit_code"])
            rows.append(row)
            continue
        rep = CurveReport.from_dict(json.loads(res["report"]))
        qh, lct = rep.qh["quasi_homogeneous"], rep.lct["holds"]
        mismatch = (entry.expect_qh is not None and entry.expect_qh != qh) or \
                   (entry.expect_lct is not None and entry.expect_lct != lct)
        row.update(qh=qh, lct=lct, label=rep.lct["label"], cached=res["cached"],
                   status="mismatch" if mismatch else "ok")
        if mismatch:
            exit_code = max(exit_code, EXIT_MISMATCH)
        if out_dir is not None:
            _atomic_write(Path(out_dir) / f"{_safe(entry.name)}.json", res["report"])
        rows.append(row)
    summary = {"total": len(entries) + len(warnings), "processed": len(entries),
               "skipped": len(warnings), "warnings": warnings, "entries": rows,
               "exit_code": exit_code, "engine_version": __version__}
    if out_dir is not None:
        _atomic_write(Path(out_dir) / "summary.json", json.dumps(summary, sort_keys=True, indent=2) + "\n")
        _atomic_write(Path(out_dir) / "summary.txt", summary_table(summary))
    return summary


def _safe(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in name)


def summary_table(summary: Dict[str, Any]) -> str:
    lines = [f"{'name':<24} {'QH':<6} {'LCT':<6} {'status':<9} label"]
    for r in summary["entries"]:
        lines.append(f"{r['name']:<24} {str(r.get('qh', '-')):<6} {str(r.get('lct', '-')):<6} "
                     f"{r['status']:<9} {r.get('label', r.get('error', ''))}")
    lines.append(f"{summary['processed']} processed, {summary['skipped']} skipped, exit code {summary['exit_code']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- entry point

def _cmd_run(args) -> int:
    config = RunConfig(args.order, args.kmax, args.degree_bound, args.format)
    try:
        vars_ = tuple(v.strip() for v in args.vars.split(",")) if args.vars else None
        f = parse_poly(args.f, vars_)
    except ParseError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    hint = args.basis.split(";") if args.basis else None
    try:
        rep = run_single(f, config, args.name, hint, symbol=args.symbol)
    except StageError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    sys.stdout.write(report_emit(rep, config.format))
    return EXIT_OK


def _cmd_catalog(args) -> int:
    config = RunConfig(args.order, args.kmax, args.degree_bound, "structured", args.cache)
    path = args.path or default_catalog_path()
    try:
        summary = run_catalog(path, config, args.jobs, args.out)
    except OSError as e:
        print(f"input error: cannot read catalog: {e}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(summary_table(summary))
    return summary["exit_code"]


def _cmd_verify(args) -> int:
    from .golden import golden_checks
    try:
        checks = golden_checks()
    except (InconsistentReport, QHInconsistency, AssertionError) as e:
        print(f"internal inconsistency: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}" + (f"  ({c.detail})" if c.detail else ""))
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if not failed else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logcomp", description="Logarithmic comparison checks for free divisors.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--order", default="grevlex", choices=["grevlex", "grlex", "lex"])
        sp.add_argument("--kmax", type=int, default=10)
        sp.add_argument("--degree-bound", type=int, default=2)

    r = sub.add_parser("run", help="analyse one divisor")
    r.add_argument("--f", required=True, help="divisor, e.g. 'x^2 - y^3'")
    r.add_argument("--vars", help="comma separated variables (default: inferred)")
    r.add_argument("--format", default="text", choices=["text", "structured"])
    r.add_argument("--basis", help="';'-separated vector fields to use as Saito basis")
    r.add_argument("--name")
    r.add_argument("--symbol", default="f", help="name of the divisor in text output")
    common(r)
    r.set_defaults(func=_cmd_run)

    c = sub.add_parser("catalog", help="run a JSONL catalog")
    c.add_argument("--path", help="catalog file (default: bundled catalog)")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--cache", help="cache directory")
    c.add_argument("--out", help="directory for per-entry reports and the summary")
    common(c)
    c.set_defaults(func=_cmd_catalog)

    v = sub.add_parser("verify-paper", help="run the built-in golden suite")
    v.set_defaults(func=_cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

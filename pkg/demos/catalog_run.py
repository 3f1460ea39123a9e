"""Run the bundled catalog of curves and surfaces, then read a report back.

Run: python3 demos/catalog_run.py
"""

import json
import tempfile
from pathlib import Path

from logcomp.cli import RunConfig, default_catalog_path, run_catalog, summary_table
from logcomp.report import parse_report, report_emit

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "out"
    config = RunConfig(cache_dir=str(Path(tmp) / "cache"))
    summary = run_catalog(default_catalog_path(), config, jobs=2, out_dir=out)
    print(summary_table(summary))
    print("exit code:", summary["exit_code"])

    # Second pass is served from the cache
    again = run_catalog(default_catalog_path(), config, jobs=1)
    verdicts = lambda s: [(r["name"], r.get("qh"), r.get("lct")) for r in s["entries"]]
    print("served from cache:", all(r["cached"] for r in again["entries"]))
    print("same verdicts:", verdicts(again) == verdicts(summary))

    # Every entry leaves a JSON report that parses back losslessly
    path = out / "cusp.json"
    report = parse_report(path.read_text())
    print(f"\n{path.name}:")
    print(report_emit(report, "text"))
    print("keys:", ", ".join(sorted(json.loads(path.read_text()))))

"""Curve reports: a JSON-native record of every verdict and its witness."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional

from .polyring import Poly, format_coeff_term, join_terms, monomial_factors

SCHEMA_VERSION = 1


@dataclass
class CurveReport:
    name: str
    divisor: Dict[str, Any]
    config: Dict[str, Any]
    basis: Dict[str, Any]
    brackets: List[Dict[str, Any]]
    qh: Dict[str, Any]
    resolution: Dict[str, Any]
    duality: Dict[str, Any]
    grF: Dict[str, Any]
    containment: bool
    ext2: Optional[Dict[str, Any]]
    lct: Dict[str, Any]
    engine_version: str
    facts: Dict[str, Any] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION
    timing: Optional[float] = field(default=None, compare=False)

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d.pop("timing")
        return d

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "CurveReport":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown report keys: {sorted(unknown)}")
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {d.get('schema_version')!r}")
        return cls(**d)


def times_symbol(p: Poly, sym: str) -> str:
    """Signed text for ``p * sym``: ``4 h``, ``-x δ2``, ``(2 x - 3 y) h``."""
    if p.is_zero():
        return "0"
    if len(p.terms) == 1:
        (e, c), = p.terms.items()
        factors = monomial_factors(p.ring.names, e)
        if not factors and abs(c) == 1:
            return ("-" if c < 0 else "") + sym
        return format_coeff_term(c, factors, " ") + " " + sym
    return f"({p.to_str(' ')}) {sym}"


def combination_text(coeffs: List[Poly], syms: List[str]) -> str:
    parts = [times_symbol(c, s) for c, s in zip(coeffs, syms) if c]
    return join_terms(parts)


def report_emit(report: CurveReport, fmt: str = "text") -> str:
    if fmt == "structured":
        return json.dumps(report.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    return _text(report)


def parse_report(text: str) -> CurveReport:
    return CurveReport.from_dict(json.loads(text))


def _pretty(s: str) -> str:
    return s.replace("*", " ")


def _yn(b) -> str:
    return {True: "yes", False: "no", None: "n/a"}[b]


def _text(r: CurveReport) -> str:
    sym = r.divisor["symbol"]
    lines = [f"== {r.name} ==",
             f"divisor: {sym} = {_pretty(r.divisor['expr'])}   (variables {', '.join(r.divisor['variables'])})"]
    b = r.basis
    lines.append(f"Saito basis ({b['source']}), det = {b['unit']} {sym}:")
    for i, d in enumerate(b["derivations"], 1):
        lines.append(f"  δ{i} = {_pretty(d['delta'])}")
    lines.append("cofactors:")
    for i, d in enumerate(b["derivations"], 1):
        lines.append(f"  δ{i}({sym}) = {d['cofactor_text']}")
    lines.append("brackets:")
    for br in r.brackets:
        lines.append(f"  {br['text']}")
    res = r.resolution
    lines.append("syzygies:")
    for k, rel in enumerate(res.get("relations", []), 1):
        lines.append(f"  r{k} = ({', '.join(map(_pretty, rel))})")
    for k, s in enumerate(res.get("last_syzygy", []), 1):
        lines.append(f"  s{k} = {_pretty(s)}")
    if res.get("n") == 2:
        lines.append(f"  phi2*phi1 = 0: {_yn(res['phi_composition_zero'])}; "
                     f"psi2*psi1 = 0: {_yn(res['psi_composition_zero'])}")
    else:
        lines.append(f"  relations are syzygies: {_yn(res['relations_are_syzygies'])}; "
                     f"they generate the first syzygies: {_yn(res['relations_generate_first_syzygies'])}; "
                     f"second syzygy generators: {len(res['second_syzygies'])}; "
                     f"s*R = 0: {_yn(res['second_composition_zero'])}")
    du = r.duality
    lines.append(f"duality: transposed presentation equals twisted ideal: {_yn(du['equal'])}")
    for k, t in enumerate(du["transposed"], 1):
        label = f"s{k}^t" if res.get("n") == 3 else f"dual generator {k}"
        lines.append(f"  {label} = {_pretty(t)}")
    for name, ok in du.get("identities", {}).items():
        lines.append(f"  {name}: {_yn(ok)}")
    g = r.grF
    lines.append(f"gr^F: symbols {', '.join(map(_pretty, g['symbols']))}")
    reg = f"  regular sequence: {_yn(g['regular'])}"
    if not g["regular"] and g["witness"] is not None:
        reg += f" (witness {_pretty(g['witness'])} at position {g['failing_index'] + 1})"
    lines.append(reg)
    lines.append(f"  symbol ideals of I_log and twisted I_log agree: {_yn(g['symbol_ideals_equal'])}")
    lines.append(f"twisted ideal annihilates 1/{sym}: {_yn(r.containment)}")
    q = r.qh
    wit = q.get("unit_cofactor_witness")
    wtxt = f" (unit cofactor a{wit['index'] + 1} = {_pretty(wit['cofactor'])})" if wit else ""
    lines.append(f"quasi-homogeneous: {_yn(q['quasi_homogeneous'])}{wtxt}; "
                 f"{sym} in Jacobian ideal: {_yn(q['jacobian_member'])}")
    if r.ext2 is not None:
        e = r.ext2
        if e["first_unsolvable"] is not None:
            lines.append(f"Ext^2 probe: 1 not in image mod m^{e['first_unsolvable']} -> Ext^2 != 0 (certificate)")
        else:
            lines.append(f"Ext^2 probe: solvable for K <= {max(map(int, e['solvable']))} (evidence only)")
    lines.append(f"logarithmic comparison: {r.lct['label']}")
    for k, v in sorted(r.facts.items()):
        lines.append(f"external fact ({k}): {_pretty(v)}")
    if r.timing is not None:
        lines.append(f"time: {r.timing:.2f} s")
    return "\n".join(lines) + "\n"

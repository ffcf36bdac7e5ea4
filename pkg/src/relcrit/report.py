"""Machine (JSON) and human (table) renderings of results."""

from __future__ import annotations

import json
import math
from fractions import Fraction

from . import __version__
from .cones import PartitionReport
from .criterion import ParabolicVerdict, ProbeReport, Verdict
from .involution import InvolutionData, component_lattices, restricted_name, sigma_split_subsets
from .lattice import fmt_q
from .rootdatum import simple_name

TOOL = "relcrit"


def q(x) -> str:
    return fmt_q(Fraction(x))


def qv(v) -> list[str]:
    return [q(x) for x in v]


def dumps(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def envelope(command: str, body: dict) -> dict:
    return {"tool": TOOL, "version": __version__, "command": command, **body}


def names(I) -> list[str]:
    return [simple_name(i) for i in I]


# --- describe -------------------------------------------------------------

def describe_dict(data: InvolutionData, name: str = "") -> dict:
    subsets = []
    for s in sigma_split_subsets(data):
        entry = {
            "subset": names(s.subset),
            "restricted": [restricted_name(k) for k in s.restricted],
            "S_I": [list(b) for b in s.lattice.basis],
        }
        if s.subset != data.full_subset:
            entry["component_index"] = str(component_lattices(data, s.restricted)[2])
        subsets.append(entry)
    return {
        "name": name or data.base.name,
        "rank": data.rank,
        "simple_roots": {simple_name(i): list(a) for i, a in enumerate(data.base.simple_roots)},
        "sigma": [list(r) for r in data.sigma],
        "fixed_simple": names(data.fixed_simple),
        "restricted_simple": {
            restricted_name(k): {"vector": qv(r.vector), "preimages": [list(p) for p in r.preimages]}
            for k, r in enumerate(data.restricted_simple)
        },
        "restricted_roots": [qv(r.vector) for r in data.restricted_roots],
        "S0": [list(b) for b in data.S0.basis],
        "Z0": [list(b) for b in data.Z0.basis],
        "sigma_split_subsets": subsets,
    }


def describe_table(d: dict) -> str:
    lines = [f"datum {d['name']}  rank {d['rank']}"]
    for k, v in d["simple_roots"].items():
        lines.append(f"  {k:<10} {v}")
    lines.append(f"  fixed simple roots: {', '.join(d['fixed_simple']) or '(none)'}")
    for k, v in d["restricted_simple"].items():
        lines.append(f"  {k:<10} ({', '.join(v['vector'])})")
    lines.append(f"  restricted roots: {len(d['restricted_roots'])}")
    lines.append(f"  S0 basis: {d['S0']}")
    lines.append(f"  Z0 basis: {d['Z0'] or '(trivial)'}")
    lines.append("sigma-split subsets:")
    w = max(len(", ".join(s["subset"]) or "{}") for s in d["sigma_split_subsets"]) + 2
    for s in d["sigma_split_subsets"]:
        label = "{" + ", ".join(s["subset"]) + "}"
        extra = f"  index {s['component_index']}" if "component_index" in s else ""
        lines.append(f"  {label:<{w + 2}} S_I basis {s['S_I']}{extra}")
    return "\n".join(lines) + "\n"


# --- verdicts -------------------------------------------------------------

def parabolic_dict(p: ParabolicVerdict) -> dict:
    out = {
        "subset": names(p.subset),
        "passed": p.passed,
        "rays": [{"along": p.ray_names[r.index], "point": list(r.point), "value": q(r.value)} for r in p.rays],
        "exponents": [],
        "skipped": list(p.skipped),
    }
    if p.reason:
        out["reason"] = p.reason
    for r in p.results:
        e = {
            "label": r.label,
            "vector": qv(r.vector),
            "lambda_support": r.lambda_support,
            "passed": r.passed,
            "ray_pairings": qv(r.pairings),
        }
        if r.reference_pairings is not None:
            e["reference_ray_pairings"] = qv(r.reference_pairings)
        if r.reason:
            e["reason"] = r.reason
        if r.witness is not None:
            e["witness"] = {"point": list(r.witness.point), "pairing": q(r.witness.pairing),
                            "reason": r.witness.reason}
        out["exponents"].append(e)
    return out


def verdict_dict(v: Verdict) -> dict:
    return {
        "kind": v.kind,
        "lambda_only": v.lambda_only,
        "passed": v.passed,
        "summary": summary_line(v),
        "parabolics": [parabolic_dict(p) for p in v.parabolics],
    }


def summary_line(v: Verdict) -> str:
    if v.kind == "casselman":
        what = "square integrable"
    elif v.lambda_only:
        what = "H-square integrable w.r.t. λ"
    else:
        what = "H-square integrable w.r.t. every λ"
    if v.passed:
        return f"PASS ({what})"
    return f"FAIL (not {what})"


def verdict_table(v: Verdict) -> str:
    lines = []
    for p in v.parabolics:
        head = "{" + ", ".join(names(p.subset)) + "}"
        lines.append(f"parabolic {head}: {'pass' if p.passed else 'fail'}"
                     + (f" ({p.reason})" if p.reason else ""))
        for r in p.rays:
            lines.append(f"  ray along {p.ray_names[r.index]}: {list(r.point)}")
        rows = []
        for r in p.results:
            pair = ", ".join(qv(r.pairings))
            ref = ", ".join(qv(r.reference_pairings)) if r.reference_pairings is not None else "-"
            wit = f"witness {list(r.witness.point)} ({r.reason})" if r.witness else (r.reason or "")
            rows.append((r.label, "(" + ", ".join(qv(r.vector)) + ")", "yes" if r.lambda_support else "no",
                         pair, ref, "pass" if r.passed else "fail", wit))
        if rows:
            header = ("exponent", "vector", "lambda", "ray pairings", "reference", "result", "")
            widths = [max(len(x[i]) for x in rows + [header]) for i in range(len(header))]
            for row in [header] + rows:
                lines.append("  " + "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if p.skipped:
            lines.append(f"  not lambda-supported, skipped: {', '.join(p.skipped)}")
    lines.append(summary_line(v))
    return "\n".join(lines) + "\n"


# --- partition and probe --------------------------------------------------

def partition_dict(r: PartitionReport) -> dict:
    out = {
        "threshold": r.threshold,
        "radius": r.radius,
        "points": r.points,
        "overlaps": r.overlaps,
        "gaps": r.gaps,
        "ok": r.ok,
        "counts": [{"subset": names(k), "points": v} for k, v in sorted(r.counts.items())],
        "summary": partition_line(r),
    }
    if r.first_violation is not None:
        y, hits = r.first_violation
        out["first_violation"] = {"point": list(y), "regions": [names(h) for h in hits]}
    return out


def partition_line(r: PartitionReport) -> str:
    head = "partition verified" if r.ok else "partition FAILED"
    return f"{head}: {r.overlaps} overlaps, {r.gaps} gaps"


def partition_table(r: PartitionReport) -> str:
    lines = [f"threshold N = {r.threshold}, box radius {r.radius}, {r.points} points of S0^-"]
    for k, v in sorted(r.counts.items()):
        lines.append(f"  {'{' + ', '.join(names(k)) + '}':<28} {v}")
    if r.first_violation is not None:
        lines.append(f"  first violation at {list(r.first_violation[0])}")
    lines.append(partition_line(r))
    return "\n".join(lines) + "\n"


def _float(x):
    if x is None:
        return None
    if not math.isfinite(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.12g}")


def probe_dict(p: ProbeReport) -> dict:
    return {
        "classification": p.classification,
        "ratio": _float(p.ratio),
        "reason": p.reason,
        "fits": [{"radius": f.radius, "ratio": _float(f.ratio), "partial_sum": _float(f.partial_sum)}
                 for f in p.fits],
        "raw_ratios": [_float(x) for x in p.raw_ratios],
    }


def probe_table(p: ProbeReport) -> str:
    lines = ["radius  fitted ratio  partial sum"]
    for f in p.fits:
        r = "-" if f.ratio is None else f"{f.ratio:.6f}"
        lines.append(f"{f.radius:>6}  {r:>12}  {f.partial_sum:.6g}")
    lines.append(f"{p.classification} ({p.reason})")
    return "\n".join(lines) + "\n"

"""
Report serialization
--------------------
Every report type is first reduced to a plain dict (`report_to_dict`), and both
output formats are rendered from that dict, so text and JSON never disagree.

JSON layout of a verification report:

    {"group": ..., "theorem": ..., "convention": ...,
     "hypotheses": [{"name": ..., "holds": ...}],
     "instances": [{"maximal_gens": [...], "core_gens": [...], "q": 3 | "omega": [2, 3],
                    "witness_gens": [...], "normalizer_gens": [...], "contained": true,
                    "status": ..., "case": ..., "checks": [...], "note": ...}],
     "verdict": ..., "counterexample_details": ..., "checks": [...], "notes": [...], "skipped": [...]}

Generators are 1-based cycle strings.
"""
import json
import logging
from functools import singledispatch
from typing import Any, Sequence

from maxnorm.harness import LemmaSweepReport, TheoremWitness, VerificationReport
from maxnorm.perm_core import GeneratedGroup, generator_strings
from maxnorm.question import QuestionScanReport, ScanInstance
from maxnorm.structure import StructureReport

logger = logging.getLogger(__name__)

FORMATS = ("text", "json")


def _gens(G: GeneratedGroup | None) -> list[str] | None:
    return None if G is None else generator_strings(G)


def _checks(checks: Sequence[tuple[str, bool]]) -> list[dict]:
    return [{"name": name, "holds": bool(holds)} for name, holds in checks]


@singledispatch
def report_to_dict(report: Any) -> dict:
    raise TypeError(f"no serializer for {type(report).__name__}")


@report_to_dict.register
def _(report: VerificationReport) -> dict:
    out = {
        "kind": "verification",
        "group": report.group_name,
        "theorem": report.theorem.value,
        "convention": report.convention,
        "hypotheses": _checks(report.hypotheses_checked),
        "instances": [_instance_dict(w) for w in report.instances],
        "verdict": report.verdict.value,
        "counterexample_details": report.counterexample_details,
        "checks": _checks(report.checks),
        "notes": list(report.notes),
        "skipped": list(report.skipped),
    }
    if report.p is not None:
        out["p"] = report.p
    if report.pi is not None:
        out["pi"] = list(report.pi)
    return out


def _instance_dict(w: TheoremWitness) -> dict:
    out: dict[str, Any] = {
        "maximal_gens": _gens(w.maximal),
        "maximal_order": w.maximal.order.value,
        "core_gens": _gens(w.core),
        "core_order": w.core.order.value,
    }
    if w.q is not None:
        out["q"] = w.q
    if w.pi is not None:
        out["omega"] = list(w.pi)
    out.update({
        "witness_gens": _gens(w.witness_subgroup),
        "normalizer_gens": _gens(w.witness_normalizer),
        "contained": w.contained,
        "status": w.status,
        "case": w.case,
        "class_size": w.class_size,
        "checks": _checks(w.checks),
        "note": w.note,
    })
    return out


@report_to_dict.register
def _(report: QuestionScanReport) -> dict:
    return {
        "kind": "question_scan",
        "groups": list(report.groups),
        "instances": [_scan_instance_dict(i) for i in report.instances],
        "open_cases": len(report.open_cases),
        "skipped": list(report.skipped),
    }


def _scan_instance_dict(i: ScanInstance) -> dict:
    return {
        "group": i.group_name,
        "p": i.p,
        "maximal_gens": _gens(i.maximal),
        "maximal_order": i.maximal.order.value,
        "index": i.index,
        "core_order": i.core_order,
        "fitting_primes": list(i.fitting_primes),
        "classification": i.classification,
        "sylow_witness_primes": list(i.sylow_witness_primes),
        "hall_witness_found": i.hall_witness_found,
    }


@report_to_dict.register
def _(report: LemmaSweepReport) -> dict:
    return {
        "kind": "lemma_sweep",
        "group": report.group_name,
        "results": [{"lemma": r.lemma, "pi": list(r.pi), "subject_order": r.subject_order, "holds": r.holds}
                    for r in report.results],
        "excluded": {str(k): v for k, v in sorted(report.excluded.items())},
        "verdict": report.verdict.value,
    }


@report_to_dict.register
def _(report: StructureReport) -> dict:
    maximals = None
    if report.maximal_classes is not None:
        maximals = [{"order": c.order, "class_size": c.class_size, "normal": c.is_normal,
                     "gens": _gens(c.representative)} for c in report.maximal_classes]
    return {
        "kind": "structure",
        "group": report.name,
        "degree": report.degree,
        "order": report.order.value,
        "order_factors": {str(p): e for p, e in report.order.factors},
        "primes": list(report.order.primes),
        "solvable": report.solvable,
        "nilpotent": report.nilpotent,
        "derived_orders": list(report.derived_orders),
        "fitting_order": report.fitting_order,
        "p_core_orders": {str(p): o for p, o in sorted(report.p_core_orders.items())},
        "frattini_order": report.frattini_order,
        "maximal_classes": maximals,
        "notes": list(report.notes),
    }


# --- Text rendering ---

def _mark(holds: bool) -> str:
    return "ok" if holds else "FAIL"


def _text_verification(d: dict) -> list[str]:
    title = f"{d['group']}: theorem {d['theorem']}"
    if "p" in d:
        title += f" (p = {d['p']})"
    if "pi" in d:
        title += " (π = {" + ", ".join(map(str, d["pi"])) + "})"
    lines = [title, f"  convention: {d['convention']}"]
    lines += [f"  hypothesis [{_mark(h['holds'])}] {h['name']}" for h in d["hypotheses"]]
    for inst in d["instances"]:
        target = f"q={inst['q']}" if "q" in inst else "ω={" + ", ".join(map(str, inst.get("omega", []))) + "}"
        line = (f"  H order {inst['maximal_order']} gens {' '.join(inst['maximal_gens'])}; core {inst['core_order']}; "
                f"{target}; {inst['status']}")
        if inst["witness_gens"] is not None:
            line += f"; witness {' '.join(inst['witness_gens'])}"
        line += f"; N ⊆ H: {'yes' if inst['contained'] else 'no'}"
        if inst["case"]:
            line += f"; {inst['case']}"
        if inst["note"]:
            line += f"; {inst['note']}"
        lines.append(line)
        lines += [f"    check [{_mark(c['holds'])}] {c['name']}" for c in inst["checks"]]
    lines += [f"  check [{_mark(c['holds'])}] {c['name']}" for c in d["checks"]]
    lines += [f"  skipped: {s}" for s in d["skipped"]]
    lines += [f"  note: {n}" for n in d["notes"]]
    if d["counterexample_details"]:
        lines.append("  details:")
        lines += [f"    {row}" for row in d["counterexample_details"].splitlines()]
    lines.append(f"  verdict: {d['verdict']}")
    return lines


def _text_scan(d: dict) -> list[str]:
    lines = [f"question scan over {len(d['groups'])} groups: {len(d['instances'])} instances, "
             f"{d['open_cases']} with F(M/Core) = 1"]
    for i in d["instances"]:
        line = f"  {i['group']} p={i['p']} |M|={i['maximal_order']} index {i['index']}: {i['classification']}"
        if i["hall_witness_found"] is not None:
            primes = ", ".join(map(str, i["sylow_witness_primes"])) or "none"
            line += f"; Sylow normalizers inside M for q in {{{primes}}}; Hall p′ normalizer inside M: " \
                    f"{'yes' if i['hall_witness_found'] else 'no'} (observed, not a theorem)"
        lines.append(line)
    lines += [f"  skipped: {s}" for s in d["skipped"]]
    return lines


def _text_lemmas(d: dict) -> list[str]:
    lines = [f"{d['group']}: lemma sweep"]
    for lemma in (1, 2, 3):
        rows = [r for r in d["results"] if r["lemma"] == lemma]
        failed = [r for r in rows if not r["holds"]]
        lines.append(f"  lemma {lemma}: {len(rows)} instances, {len(failed)} failed, "
                     f"{d['excluded'][str(lemma)]} excluded")
        for r in failed:
            lines.append(f"    FAIL π={{{', '.join(map(str, r['pi']))}}} subject order {r['subject_order']}")
    lines.append(f"  verdict: {d['verdict']}")
    return lines


def _text_structure(d: dict) -> list[str]:
    factors = " · ".join(p if e == 1 else f"{p}^{e}" for p, e in d["order_factors"].items()) or "1"
    lines = [
        f"{d['group'] or 'G'}: degree {d['degree']}, order {d['order']} = {factors}",
        f"  solvable: {d['solvable']}, nilpotent: {d['nilpotent']}",
        f"  derived series orders: {' > '.join(map(str, d['derived_orders']))}",
        f"  |F(G)| = {d['fitting_order']}",
    ]
    lines += [f"  |O_{p}(G)| = {o}" for p, o in d["p_core_orders"].items()]
    if d["frattini_order"] is not None:
        lines.append(f"  |Φ(G)| = {d['frattini_order']}")
    for c in d["maximal_classes"] or []:
        kind = "normal" if c["normal"] else f"{c['class_size']} conjugates"
        lines.append(f"  maximal order {c['order']} ({kind}): {' '.join(c['gens'])}")
    lines += [f"  note: {n}" for n in d["notes"]]
    return lines


_TEXT = {
    "verification": _text_verification,
    "question_scan": _text_scan,
    "lemma_sweep": _text_lemmas,
    "structure": _text_structure,
}


def render_text(d: dict) -> str:
    return "\n".join(_TEXT[d["kind"]](d)) + "\n"


def write_report(report: Any, fmt: str = "text") -> bytes:
    """
    Serializes one report, a list of reports, or an already reduced dict.
    An empty list gives `[]` in JSON and an empty text document.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format '{fmt}' (expected text or json)")
    items = report if isinstance(report, list) else [report]
    dicts = [r if isinstance(r, dict) else report_to_dict(r) for r in items]
    if fmt == "json":
        payload = dicts if isinstance(report, list) else dicts[0]
        return (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    return "\n".join(render_text(d) for d in dicts).encode("utf-8")

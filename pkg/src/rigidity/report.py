"""Report documents: payload builders and exact JSON / text serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .exact_arith import Cyclotomic, render

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "pass": bool(self.passed), "detail": self.detail}


@dataclass(frozen=True)
class ReportDocument:
    command: str
    timestamp: str
    config: dict
    payload: dict
    checks: tuple[Check, ...] = field(default=())
    schema_version: str = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "timestamp": self.timestamp,
            "config": self.config,
            "payload": self.payload,
            "checks": [c.to_json() for c in self.checks],
            "pass": self.passed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ReportDocument":
        checks = tuple(Check(c["name"], c["pass"], c.get("detail", "")) for c in data["checks"])
        doc = cls(data["command"], data["timestamp"], data["config"], data["payload"], checks,
                  data["schema_version"])
        if doc.passed != data["pass"]:
            raise ValueError("stored overall verdict disagrees with the checks")
        return doc


def jsonable(x: Any) -> Any:
    """Exact, JSON-safe form: rationals and cyclotomics become strings, tuples become lists."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Cyclotomic):
        return render(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, float):
        raise TypeError("floats are not allowed in exact reports")
    return str(x)


def serialize(doc: ReportDocument, fmt: str = "json") -> bytes:
    if fmt == "json":
        text = json.dumps(doc.to_json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    elif fmt == "text":
        text = render_text(doc)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return text.encode("utf-8")


def parse(data: bytes) -> ReportDocument:
    return ReportDocument.from_json(json.loads(data.decode("utf-8")))


# --- text rendering ------------------------------------------------------------

def _table(rows: list[list[str]], header: list[str]) -> list[str]:
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    fmt = "  ".join("{:<%d}" % w for w in widths)
    out = [fmt.format(*header), fmt.format(*["-" * w for w in widths])]
    out += [fmt.format(*map(str, r)) for r in rows]
    return out


def _text_payload(command: str, payload: dict) -> list[str]:
    lines: list[str] = []
    if command == "char-table":
        header = ["chi"] + payload["classes"]
        rows = [[row["name"]] + row["values"] for row in payload["characters"]]
        lines += _table(rows, header)
        lines.append("class sizes: " + " ".join(map(str, payload["class_sizes"])))
    elif command == "orbits":
        lines.append(f"curve: {payload['curve']} (genus {payload['genus']})")
        rows = [[o["representative"], o["stabilizer"], f"x -> {o['local_eigenvalue']}*x", o["length"]]
                for o in payload["orbits"]]
        lines += _table(rows, ["point", "stabilizer", "local action", "length"])
    elif command == "certify":
        for cert in payload["certificates"]:
            lines += _text_certificate(cert)
    elif command == "resolve":
        lines += _text_resolution(payload)
    elif command == "lp-check":
        for d in payload["divisors"]:
            lines.append(f"D_{d['index']}: equal={d['equal']} certified={d['certified']} witness={d['witness']}")
            for q in d["inequalities"]:
                lines.append(f"  <{q['w']}, x> >= {q['c']}: g={q['g']} lp_min={q['lp_minimum']} "
                             f"rounded={q['rounded']} certified={q['certified']}")
            b = d["brute_force"]
            lines.append(f"  box radius {b['radius']}: {b['coarse_points']} points, witness {b['witness']}")
    return lines


def _text_certificate(cert: dict) -> list[str]:
    chi = cert["chi_psi"]
    lines = [f"n = {cert['n']}"]
    mult = " + ".join(f"{m}*{k}" for k, m in chi["multiplicities"].items() if m)
    lines.append(f"  chi_psi = {mult}   (trivial multiplicity {chi['trivial_multiplicity']})")
    for s in cert["singularities"]:
        lines.append(f"  {s['multiplicity']} x {s['type']}: ages {', '.join(s['ages'])}, "
                     f"canonical={s['canonical']}")
    for r in cert["resolution_reports"]:
        lines.append(f"  resolution of {r['label']}: pass={r['passed']}")
    lines.append(f"  free in codimension one: {cert['free_in_codim_one']}")
    lines.append(f"  kodaira dimension: {cert['kodaira']}")
    lines.append(f"  infinitesimally rigid: {cert['conclusion']['infinitesimally_rigid']}")
    return lines


def _text_resolution(r: dict) -> list[str]:
    lines = [f"resolution of {r['label']} (dimension {r['dimension']})",
             f"  rays: {len(r['rays'])}, maximal cones: {len(r['cones'])}, "
             f"all smooth: {r['all_cones_smooth']}, volumes conserved: {r['volumes_conserved']}"]
    for i, step in enumerate(r["steps"]):
        bad = [c for c in step["cones"] if c["index"] != "1"]
        lines.append(f"  step {i + 1}: subdivide at {step['ray']}; non-smooth cones: "
                     + (", ".join(f"{c['rays']} (index {c['index']})" for c in bad) or "none"))
    for e in r["exceptional"]:
        lines.append(f"  exceptional ray {e['ray']}: {e['geometry']}, O_E(E) = {e['self_restriction']}, "
                     f"h1 = {e['h1']}")
        if e["canonical_class"] is not None:
            lines.append(f"    K_E = {e['canonical_class']} (expected {e['expected_canonical']}), "
                         f"Serre dual degree {e['serre_dual_degree']}")
    lines.append(f"  pushforward reflexive: {r['pushforward_reflexive']}")
    lines.append(f"  R^1 vanishing: {r['r1_vanishing']}")
    return lines


def render_text(doc: ReportDocument) -> str:
    lines = [f"{doc.command}  (schema {doc.schema_version}, {doc.timestamp})"]
    lines += _text_payload(doc.command, doc.payload)
    lines.append("")
    for c in doc.checks:
        lines.append(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}" + (f": {c.detail}" if c.detail else ""))
    lines.append(f"overall: {'PASS' if doc.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


# --- payload builders ------------------------------------------------------------

def kodaira_json(k: Optional[int]):
    return "-inf" if k is None else k


def character_table_payload() -> dict:
    from .group_rep import CLASS_LABELS, IRREDUCIBLE_NAMES, character_table, class_sizes
    return jsonable({
        "classes": list(CLASS_LABELS),
        "class_sizes": list(class_sizes()),
        "characters": [{"name": name, "values": list(chi.values)}
                       for name, chi in zip(IRREDUCIBLE_NAMES, character_table())],
    })


def orbit_payload(curve: str) -> dict:
    from .curve_actions import curve_genus, orbit_data
    return jsonable({
        "curve": curve,
        "genus": curve_genus(curve),
        "orbits": [{
            "representative": str(d.representative),
            "stabilizer": f"<{d.stabilizer_generator}>",
            "stabilizer_order": d.stabilizer_order,
            "length": d.length,
            "local_eigenvalue": d.local_eigenvalue,
            "orbit": [str(p) for p in d.orbit],
        } for d in orbit_data(curve)],
    })


def lattice_points_json(lp) -> dict:
    b = lp.brute
    return {
        "equal": lp.equal,
        "certified": lp.certified,
        "witness": lp.witness,
        "oracle_agrees": lp.oracle_agrees,
        "inequalities": [{
            "w": q.w, "c": q.c, "g": q.g, "lp_minimum": q.lp_minimum,
            "lp_vertex": q.lp_vertex, "rounded": q.rounded, "certified": q.certified,
        } for q in lp.checks],
        "brute_force": None if b is None else {
            "radius": b.radius, "box": b.box, "coarse_points": b.coarse_points, "witness": b.witness},
    }


def resolution_payload(report) -> dict:
    res = report.resolution
    fan = res.fan
    divisors = []
    for k, d in enumerate(report.divisors):
        divisors.append({
            "index": k + 1,
            "ray": fan.rays[d.ray],
            "pushforward": None if d.lattice_points is None else lattice_points_json(d.lattice_points),
            "cartier": None if d.cartier is None else [
                {"cone": list(c), "u": u} for c, u in sorted(d.cartier.items())],
            "demazure": d.demazure,
        })
    return jsonable({
        "label": report.label,
        "dimension": report.dimension,
        "checks": list(report.checks_requested),
        "lattice_basis": res.lattice.basis.rows,
        "rays": fan.rays,
        "cones": [list(c) for c in fan.cones],
        "original_rays": res.original_rays,
        "exceptional_rays": res.exceptional_rays,
        "steps": [{
            "ray": s.ray,
            "cones": [{"rays": list(c), "index": idx} for c, idx in sorted(ind.items())],
        } for s, ind in zip(res.steps, report.step_indices)],
        "all_cones_smooth": report.all_cones_smooth,
        "volumes_conserved": report.volumes_conserved,
        "exceptional": [{
            "ray": e.ray, "geometry": e.geometry, "star_dimension": e.star_dimension,
            "hirzebruch": e.hirzebruch, "self_restriction": e.self_restriction,
            "restriction_coefficients": e.restriction_coefficients,
            "canonical_class": e.canonical_class, "expected_canonical": e.expected_canonical,
            "pullback_of_hyperplane": e.pullback_of_hyperplane,
            "serre_dual_degree": e.serre_dual_degree, "h1": e.h1, "vanishing": e.vanishing,
        } for e in report.exceptional],
        "divisors": divisors,
        "exceptional_identified": report.exceptional_identified,
        "pushforward_reflexive": report.pushforward_reflexive,
        "r1_vanishing": report.r1_vanishing,
        "passed": report.passed,
    })


def certificate_payload(cert) -> dict:
    from .deformation import reid_tai_canonical
    from .group_rep import IRREDUCIBLE_NAMES
    reports = cert.resolution_reports
    return jsonable({
        "n": cert.n,
        "chi_psi": {
            "multiplicities": dict(zip(IRREDUCIBLE_NAMES, cert.chi_psi_multiplicities)),
            "closed_form_match": cert.closed_form_match,
            "trivial_multiplicity": cert.trivial_multiplicity,
        },
        "singularities": [{
            "type": e.singularity.label,
            "order": e.singularity.order,
            "weights": e.singularity.weights,
            "multiplicity": e.singularity.multiplicity,
            "ages": reid_tai_canonical(e.singularity).ages,
            "canonical": e.verdict.canonical,
        } for e in cert.singularities],
        "resolution_reports": [resolution_payload(r) for r in reports],
        "free_in_codim_one": cert.free_in_codim_one,
        "kodaira": kodaira_json(cert.kodaira),
        "hypotheses": {
            "pushforward_of_tangent_sheaf_is_reflexive": all(r.pushforward_reflexive for r in reports),
            "first_direct_image_of_tangent_sheaf_vanishes": all(r.r1_vanishing for r in reports),
            "free_in_codimension_one": cert.free_in_codim_one,
            "invariant_first_order_deformations_vanish": cert.trivial_multiplicity == 0,
        },
        "conclusion": {"infinitesimally_rigid": cert.infinitesimally_rigid},
    })

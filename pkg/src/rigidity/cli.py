"""Command-line front end: ``rigidity certify | char-table | orbits | resolve | lp-check``."""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from math import gcd
from typing import Optional, Sequence

from .report import (
    Check,
    ReportDocument,
    certificate_payload,
    character_table_payload,
    orbit_payload,
    resolution_payload,
    serialize,
    lattice_points_json,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
COMMANDS = ("certify", "char-table", "orbits", "resolve", "lp-check")
ENV_RADIUS = "RIGIDITY_BRUTE_RADIUS"
DEFAULT_N_CAP = 10


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: Optional[int] = None
    max_n: Optional[int] = None
    n_cap: int = DEFAULT_N_CAP
    brute_radius: int = 6
    output: Optional[str] = None
    format: str = "json"
    curve: Optional[str] = None
    sing: Optional[str] = None
    checks: tuple[str, ...] = ("smoothness", "pushforward", "r1")
    fan: Optional[str] = None
    jobs: int = 1
    timestamp: Optional[str] = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.format not in ("json", "text"):
            raise UsageError("format must be json or text")
        if self.brute_radius < 1:
            raise UsageError("brute radius must be >= 1")
        if self.jobs < 1:
            raise UsageError("jobs must be >= 1")
        if self.command == "certify":
            if (self.n is None) == (self.max_n is None):
                raise UsageError("certify needs exactly one of --n and --max-n")
            top = self.n if self.n is not None else self.max_n
            if top < 3:
                raise UsageError("certify needs n >= 3")
            if top > self.n_cap:
                raise UsageError(f"n = {top} exceeds the cap {self.n_cap} (raise it with --n-cap)")
        if self.command in ("resolve", "lp-check"):
            if (self.sing is None) == (self.fan is None):
                raise UsageError(f"{self.command} needs exactly one of --sing and --fan")
            if self.n is not None and self.n < 2:
                raise UsageError("resolve needs n >= 2")
            from .toric import ALL_CHECKS
            bad = set(self.checks) - set(ALL_CHECKS)
            if bad or not self.checks:
                raise UsageError(f"checks must be drawn from {','.join(ALL_CHECKS)}")
        if self.command == "orbits" and self.curve not in ("klein", "fermat"):
            raise UsageError("orbits needs --curve klein|fermat")

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("timestamp")
        d.pop("output")
        d["checks"] = list(d["checks"])
        return {k: v for k, v in d.items() if v is not None}


# --- commands ---------------------------------------------------------------------

def parse_sing(spec: str, n: Optional[int]):
    """``m:w1,...,wk`` with optional padding to dimension n by repeating w1 in front."""
    from .deformation import QuotientSingularity
    try:
        m_text, w_text = spec.split(":")
        m = int(m_text)
        weights = [int(x) for x in w_text.split(",")]
    except ValueError as exc:
        raise UsageError(f"--sing must look like 3:1,1,2, got {spec!r}") from exc
    if n is not None:
        if n < len(weights):
            raise UsageError(f"--n {n} is smaller than the number of weights")
        weights = [weights[0]] * (n - len(weights)) + weights
    try:
        return QuotientSingularity(m, tuple(weights))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _resolution(config: RunConfig):
    from .toric import ResolutionInputError, build_resolution, parse_fan_script
    try:
        if config.fan is not None:
            try:
                with open(config.fan, encoding="utf-8") as fh:
                    return parse_fan_script(fh.read())
            except OSError as exc:
                raise UsageError(f"cannot read fan file: {exc}") from exc
        s = parse_sing(config.sing, config.n)
        return build_resolution(s.order, s.weights)
    except ResolutionInputError as exc:
        raise UsageError(str(exc)) from exc


def _certify_one(n: int) -> dict:
    from .deformation import assemble_certificate
    return certificate_payload(assemble_certificate(n))


def _certificate_checks(cert: dict) -> list[Check]:
    n = cert["n"]
    chi = cert["chi_psi"]
    out = [
        Check(f"n={n}: Kunneth assembly equals closed form", chi["closed_form_match"]),
        Check(f"n={n}: invariant part of H^1(Theta) vanishes", chi["trivial_multiplicity"] == 0,
              f"trivial multiplicity {chi['trivial_multiplicity']}"),
    ]
    counts = [s["multiplicity"] for s in cert["singularities"]]
    out.append(Check(f"n={n}: two singularity types, 3^(n-1) points each",
                     counts == [3 ** (n - 1)] * 2, ", ".join(f"{s['multiplicity']} x {s['type']}"
                                                             for s in cert["singularities"])))
    out.append(Check(f"n={n}: singularities canonical", all(s["canonical"] for s in cert["singularities"])))
    for r in cert["resolution_reports"]:
        out.append(Check(f"n={n}: resolution of {r['label']}", r["passed"]))
    out.append(Check(f"n={n}: free in codimension one", cert["free_in_codim_one"]))
    out.append(Check(f"n={n}: kodaira dimension 1", cert["kodaira"] == 1, f"kodaira {cert['kodaira']}"))
    out.append(Check(f"n={n}: infinitesimally rigid", cert["conclusion"]["infinitesimally_rigid"]))
    return out


def run_certify(config: RunConfig) -> tuple[dict, list[Check]]:
    ns = [config.n] if config.n is not None else list(range(3, config.max_n + 1))
    if config.jobs > 1 and len(ns) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            certs = list(pool.map(_certify_one, ns))
    else:
        certs = [_certify_one(n) for n in ns]
    certs.sort(key=lambda c: c["n"])
    checks = [c for cert in certs for c in _certificate_checks(cert)]
    return {"certificates": certs}, checks


def run_char_table(config: RunConfig) -> tuple[dict, list[Check]]:
    from .group_rep import character_table, inner_product
    table = character_table()
    ortho = all(inner_product(a, b) == int(i == j)
                for i, a in enumerate(table) for j, b in enumerate(table))
    degrees = tuple(int(chi.degree) for chi in table)
    return character_table_payload(), [
        Check("row orthogonality", ortho),
        Check("degrees", degrees == (1, 1, 1, 3, 3), str(degrees)),
        Check("sum of squared degrees is |G|", sum(d * d for d in degrees) == 21),
    ]


def run_orbits(config: RunConfig) -> tuple[dict, list[Check]]:
    from .curve_actions import orbit_data
    data = orbit_data(config.curve)
    return orbit_payload(config.curve), [
        Check("orbit-stabilizer", all(d.length * d.stabilizer_order == 21 for d in data)),
        Check("local eigenvalue order equals stabilizer order",
              all(21 // gcd(d.local_eigenvalue.root_exponent(), 21) == d.stabilizer_order for d in data)),
    ]


def run_resolve(config: RunConfig) -> tuple[dict, list[Check]]:
    from .toric import resolution_report_for
    res = _resolution(config)
    report = resolution_report_for(res, config.checks, config.brute_radius)
    checks = []
    if "smoothness" in config.checks:
        checks.append(Check("all cones smooth", report.all_cones_smooth))
        checks.append(Check("subdivision volumes conserved", report.volumes_conserved))
    checks.append(Check("exceptional divisors identified", report.exceptional_identified,
                        ", ".join(e.geometry for e in report.exceptional)))
    if "pushforward" in config.checks:
        witnesses = [d.lattice_points.witness for d in report.divisors if d.lattice_points.witness]
        checks.append(Check("pushforward reflexive", bool(report.pushforward_reflexive),
                            f"witness ({', '.join(map(str, witnesses[0]))})" if witnesses else ""))
    if "r1" in config.checks:
        h1 = [e.h1 for e in report.exceptional]
        checks.append(Check("R^1 vanishing", bool(report.r1_vanishing), f"h1 of O_E(E): {h1}"))
    return resolution_payload(report), checks


def run_lp_check(config: RunConfig) -> tuple[dict, list[Check]]:
    from .report import jsonable
    from .toric import TorusDivisor, divisor_polyhedron, lattice_points_equal
    res = _resolution(config)
    divisors, checks = [], []
    for k, i in enumerate(res.original_rays):
        fine = divisor_polyhedron(TorusDivisor.prime(res.fan, i))
        coarse = divisor_polyhedron(TorusDivisor.prime(res.initial, k))
        lp = lattice_points_equal(fine, coarse, res.lattice, config.brute_radius)
        entry = lattice_points_json(lp)
        entry["index"] = k + 1
        divisors.append(entry)
        checks.append(Check(f"D_{k + 1}: same lattice points", lp.equal,
                            "" if lp.witness is None else f"witness ({', '.join(map(str, lp.witness))})"))
        checks.append(Check(f"D_{k + 1}: LP verdict agrees with box search", lp.oracle_agrees))
    return jsonable({"label": res.label, "divisors": divisors}), checks


RUNNERS = {
    "certify": run_certify,
    "char-table": run_char_table,
    "orbits": run_orbits,
    "resolve": run_resolve,
    "lp-check": run_lp_check,
}


def run(config: RunConfig) -> tuple[ReportDocument, int]:
    """Execute one command; raises UsageError for invalid configurations."""
    config.validate()
    payload, checks = RUNNERS[config.command](config)
    stamp = config.timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds")
    doc = ReportDocument(config.command, stamp, config.echo(), payload, tuple(checks))
    return doc, (EXIT_OK if doc.passed else EXIT_FAIL)


# --- argument parsing ----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _default_radius() -> int:
    raw = os.environ.get(ENV_RADIUS)
    if raw is None:
        return 6
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"{ENV_RADIUS} must be an integer, got {raw!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rigidity", description="Exact verification of a rigidity construction.")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--output", help="write the report here instead of stdout")
        sp.add_argument("--timestamp", help="fixed timestamp (for reproducible output)")

    c = sub.add_parser("certify", help="certificate for one n or for 3..max-n")
    c.add_argument("--n", type=int)
    c.add_argument("--max-n", type=int, dest="max_n")
    c.add_argument("--n-cap", type=int, dest="n_cap", default=DEFAULT_N_CAP)
    c.add_argument("--jobs", type=int, default=1)
    common(c)

    common(sub.add_parser("char-table", help="character table of G"))

    o = sub.add_parser("orbits", help="special orbits on a curve")
    o.add_argument("--curve", choices=("klein", "fermat"), required=True)
    common(o)

    for name in ("resolve", "lp-check"):
        r = sub.add_parser(name, help="toric resolution checks" if name == "resolve"
                           else "lattice-point criterion with LP and box-search detail")
        r.add_argument("--sing", help="m:w1,...,wk, e.g. 3:1,1,2")
        r.add_argument("--n", type=int, help="pad the weights to this dimension")
        r.add_argument("--fan", help="fan script file")
        r.add_argument("--brute-radius", type=int, dest="brute_radius")
        if name == "resolve":
            r.add_argument("--check", default="smoothness,pushforward,r1")
        common(r)
    return p


def config_from_args(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(argv)
    if ns.command is None:
        raise UsageError("no command given")
    kw = {k: v for k, v in vars(ns).items() if v is not None}
    if "check" in kw:
        kw["checks"] = tuple(x.strip() for x in kw.pop("check").split(",") if x.strip())
    if ns.command in ("resolve", "lp-check") and "brute_radius" not in kw:
        kw["brute_radius"] = _default_radius()
    return RunConfig(**kw)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        config = config_from_args(argv)
        doc, code = run(config)
    except UsageError as exc:
        print(f"rigidity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    data = serialize(doc, config.format)
    if config.output:
        try:
            with open(config.output, "wb") as fh:
                fh.write(data)
        except OSError as exc:
            print(f"rigidity: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())

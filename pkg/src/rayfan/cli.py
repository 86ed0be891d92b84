"""Batch command-line front end.

Every command reads one JSON input, writes one JSON report (to ``--output``
or stdout) and exits with 0 on success, 2 when the input is rejected and 1
on an internal error.  Reports are deterministic: keys are sorted and timing
is only included with ``--timing``.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

import jsonschema

from . import chamberfan as cf
from . import gradedring as gr
from . import toricmsr as tm
from .polycore import RationalCone
from .polycore.linalg import as_fraction
from .schemas import REPORT_SCHEMA, RING_SCHEMA, TORIC_SCHEMA

log = logging.getLogger("rayfan")

COMMANDS = (
    "chambers", "fan", "rayideal", "compare", "thm4", "one-chamber", "msr-dim",
    "classgroup", "factorial", "roundtrip", "plot2d", "selftest",
)
TORIC_COMMANDS = {"msr-dim", "classgroup", "factorial"}


class InputError(ValueError):
    """Raised for inputs that violate the schema or a precondition (exit code 2)."""

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass
class JobSpec:
    command: str
    input_path: str | None = None
    output_path: str | None = None
    grid_bound: int = 6
    samples: int = 200
    seed: int = 0
    points: list = field(default_factory=list)
    timing: bool = False


# ----- parsing -----------------------------------------------------------

def _schema_errors(data, schema) -> list[str]:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    out = []
    for e in errors:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        out.append(f"{where}: {e.message}")
    return out


def parse_ring_spec(data: dict) -> gr.GradedRingSpec:
    errors = _schema_errors(data, RING_SCHEMA)
    if errors:
        raise InputError(errors)
    names = data.get("names")
    try:
        if data["kind"] == "polynomial":
            if names is not None and len(names) != len(data["degrees"]):
                raise InputError(f"{len(names)} names for {len(data['degrees'])} generators")
            return gr.GradedRingSpec.polynomial(data["degrees"], names=names, n=data.get("n"))
        return gr.GradedRingSpec.semigroup(
            data["exponents"], data["grading_map"], degrees=data.get("degrees"), names=names
        )
    except gr.RingSpecError as exc:
        raise InputError(exc.errors) from exc


def parse_toric_spec(data: dict) -> tm.MultiSectionRingSpec:
    errors = _schema_errors(data, TORIC_SCHEMA)
    if errors:
        raise InputError(errors)
    var = data["variety"]
    try:
        X = tm.ToricVarietySpec.create(var["rays"], var["cones"], var.get("names"))
        return tm.MultiSectionRingSpec.create(X, data["divisors"])
    except tm.ToricError as exc:
        raise InputError(exc.errors) from exc


def parse_point(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(as_fraction(part) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse point {text!r}: expected comma-separated p/q entries") from exc


def _fr(v) -> list[str]:
    return [str(x) for x in v]


# ----- commands ----------------------------------------------------------

def _ideal_json(J: gr.RayIdeal) -> dict:
    return J.to_json()


def cmd_chambers(ring, job):
    arr = cf.build_arrangement(ring)
    fan = cf.assemble_fan(ring, samples=job.samples, seed=job.seed)
    chambers = fan.chambers
    results = {
        "arrangement": {
            "basis": [list(b) for b in arr.basis],
            "hyperplane_normals": [list(f) for f in arr.hyperplane_normals],
            "source_subsets": [list(s) for s in arr.source_subsets],
        },
        "chambers": [
            {
                "rays": [list(r) for r in ch.cone.rays],
                "sign_vector": list(ch.sign_vector),
                "ideal": _ideal_json(ch.ideal),
                "witnesses": [_fr(w) for w in ch.witnesses],
            }
            for ch in chambers
        ],
        "ray_ideals": [
            {"ideal": _ideal_json(c.ideal), "cone": [list(r) for r in c.cone.rays], "dim": c.cone.dim}
            for c in fan.cones
        ],
        "nonzero_ray_ideal_count": len(fan.cones),
    }
    verification = {"chamber_ideal_constant_at_3_points": True, **fan.report["checks"]}
    return results, verification


def cmd_fan(ring, job):
    fan = cf.assemble_fan(ring, samples=job.samples, seed=job.seed)
    results = fan.to_json()
    results["morphism_poset"] = cf.morphism_poset(fan)
    return results, dict(fan.report["checks"])


def _points(job, count=None) -> list:
    if not job.points:
        raise InputError(f"{job.command} needs at least one --point")
    if count is not None and len(job.points) != count:
        raise InputError(f"{job.command} needs exactly {count} --point options")
    return [parse_point(p) for p in job.points]


def cmd_rayideal(ring, job):
    out = []
    for p in _points(job):
        if len(p) != ring.n:
            raise InputError(f"point {','.join(_fr(p))} does not have {ring.n} entries")
        J = gr.ray_ideal(ring, p)
        entry = {"point": _fr(p), "ideal": _ideal_json(J)}
        if not J.is_zero:
            entry["maximal_cone"] = [list(r) for r in cf.maximal_ray_ideal_cone(ring, p).rays]
        out.append(entry)
    return {"ideals": out}, {"points_have_expected_length": True}


def cmd_compare(ring, job):
    a, b = _points(job, 2)
    for p in (a, b):
        if len(p) != ring.n:
            raise InputError(f"point {','.join(_fr(p))} does not have {ring.n} entries")
    J1, J2 = gr.ray_ideal(ring, a), gr.ray_ideal(ring, b)
    res = gr.ray_ideal_compare(J1, J2)
    return (
        {"points": [_fr(a), _fr(b)], "ideals": [J1.describe(), J2.describe()], "comparison": res.value},
        {"same_ring": True},
    )


def cmd_thm4(ring, job):
    try:
        out = cf.one_chamber_check(ring)
    except cf.ChamberError as exc:
        raise InputError(str(exc)) from exc
    return out, {"conditions_agree": out["consistent"]}


def _grid(n, bound):
    import itertools

    return list(itertools.product(range(-bound, bound + 1), repeat=n))


def cmd_msr_dim(spec, job):
    if job.points:
        rs = []
        for p in _points(job):
            if any(x.denominator != 1 for x in p) or len(p) != spec.n:
                raise InputError(f"degree {','.join(_fr(p))} must be an integer vector of length {spec.n}")
            rs.append(tuple(int(x) for x in p))
    else:
        rs = _grid(spec.n, job.grid_bound)
    dims = [{"r": list(r), "dim": tm.graded_piece_dim(spec, r)} for r in rs]
    return {"dims": dims}, {"fan_complete": spec.X.is_complete()}


def cmd_classgroup(spec, job):
    data = tm.class_group(spec)
    prim = tm.height_one_prime_data(spec)
    res = data.to_json()
    res["height_one_primes"] = [p.to_json() for p in prim["primes"]]
    return res, {"sequence_consistent": data.sequence_consistent}


def cmd_factorial(spec, job):
    out = tm.is_factorial(spec)
    return out, {"agrees_with_class_group": out["agrees_with_class_group"]}


def _chamber_for(ring, data, job) -> RationalCone:
    if job.points:
        (p,) = _points(job, 1)
        return cf.maximal_ray_ideal_cone(ring, p)
    if "chamber" in data:
        return RationalCone.from_generators(data["chamber"], ring.n)
    return cf.chamber_decomposition(ring)[0].cone


def cmd_roundtrip(ring, job, data):
    sigma = _chamber_for(ring, data, job)
    try:
        rep = tm.demazure_roundtrip(ring, sigma, grid_bound=job.grid_bound)
    except tm.RoundTripError as exc:
        raise InputError(str(exc)) from exc
    return rep.to_json(), {
        "grid_dims_match": not rep.mismatches,
        "ample_combination_in_chamber": rep.ample_combination is not None,
    }


_COLORS = ("#8dd3c7", "#fdb462", "#bebada", "#fb8072", "#80b1d3", "#b3de69", "#fccde5", "#d9d9d9")


def render_svg(ring, fan, size: int = 400) -> str:
    """Chambers as coloured sectors, degree vectors as arrows."""
    c = size / 2
    scale = 0.42 * size
    degs = [tuple(float(x) for x in d) for d in ring.degrees]

    def unit(v):
        norm = (v[0] ** 2 + v[1] ** 2) ** 0.5
        return (v[0] / norm, v[1] / norm)

    def xy(v, r=1.0):
        u = unit(v)
        return (c + r * scale * u[0], c - r * scale * u[1])

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<line x1="0" y1="{c}" x2="{size}" y2="{c}" stroke="#ccc"/>',
        f'<line x1="{c}" y1="0" x2="{c}" y2="{size}" stroke="#ccc"/>',
    ]
    for k, ch in enumerate(fan.chambers):
        rays = [tuple(float(x) for x in r) for r in ch.cone.rays]
        if len(rays) != 2:
            continue
        (x1, y1), (x2, y2) = xy(rays[0]), xy(rays[1])
        parts.append(
            f'<path d="M {c:.2f} {c:.2f} L {x1:.2f} {y1:.2f} A {scale:.2f} {scale:.2f} 0 0 0 {x2:.2f} {y2:.2f} Z" '
            f'fill="{_COLORS[k % len(_COLORS)]}" fill-opacity="0.6" stroke="#555">'
            f"<title>{ch.ideal.describe()}</title></path>"
        )
    parts.append('<defs><marker id="tip" markerWidth="8" markerHeight="8" refX="6" refY="3" orient="auto">'
                 '<path d="M0,0 L6,3 L0,6 z" fill="black"/></marker></defs>')
    for name, d in zip(ring.variable_names, degs):
        x, y = xy(d, 0.9)
        parts.append(f'<line x1="{c}" y1="{c}" x2="{x:.2f}" y2="{y:.2f}" stroke="black" marker-end="url(#tip)"/>')
        parts.append(f'<text x="{x + 4:.2f}" y="{y - 4:.2f}" font-size="12">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_plot2d(ring, job):
    if ring.n != 2:
        raise InputError("plot2d needs a Z^2-graded ring")
    fan = cf.assemble_fan(ring, samples=job.samples, seed=job.seed)
    stem = Path(job.output_path).with_suffix("") if job.output_path else Path(Path(job.input_path).stem)
    svg_path, csv_path = stem.with_suffix(".svg"), stem.with_suffix(".csv")
    svg_path.write_text(render_svg(ring, fan))
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["cone", "dim", "maximal", "generator_x", "generator_y", "ideal"])
        for k, c in enumerate(fan.cones):
            for r in c.cone.rays or ((0, 0),):
                w.writerow([k, c.cone.dim, int(c.maximal), r[0], r[1], c.ideal.describe()])
    sectors = sum(1 for ch in fan.chambers if len(ch.cone.rays) == 2)
    return (
        {"svg": str(svg_path), "csv": str(csv_path), "sectors": sectors, "chambers": len(fan.chambers)},
        dict(fan.report["checks"]),
    )


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("rayfan") / "fixtures" / name))


def load_fixture(name: str) -> dict:
    return json.loads(fixture_path(name).read_text())


def selftest_checks() -> dict:
    """Golden checks on the shipped fixtures; each value is True when the check passes."""
    checks = {}
    r21 = parse_ring_spec(load_fixture("three_variables.json"))
    fan = cf.assemble_fan(r21)
    checks["three_variables_six_ideals"] = sorted(c.ideal.describe() for c in fan.cones) == sorted(
        ["A", "(x)", "(y, xz)", "(z)", "(xy, xz)", "(xz, yz)"]
    )
    checks["three_variables_fan_ok"] = fan.fan_ok
    r24 = parse_ring_spec(load_fixture("quadric_cone.json"))
    fan = cf.assemble_fan(r24)
    checks["quadric_cone_eight_ideals"] = len(fan.cones) == 8 and fan.report["noether_normalization"]["exceeds_bound"]
    r85 = parse_ring_spec(load_fixture("two_chambers.json"))
    fan = cf.assemble_fan(r85)
    checks["two_chambers_maximal_cones"] = len(fan.maximal_cones) == 2
    rep = tm.demazure_roundtrip(r85, RationalCone.from_generators([(1, 0), (1, 1)], 2), grid_bound=6)
    checks["two_chambers_roundtrip"] = rep.ok
    r86 = parse_ring_spec(load_fixture("weighted_quadrant.json"))
    rep = tm.demazure_roundtrip(r86, RationalCone.from_generators([(1, 0), (0, 1)], 2), grid_bound=6)
    checks["weighted_quadrant_roundtrip"] = rep.ok
    for name, expected in (
        ("toric_p1xp1_halves.json", "0"),
        ("toric_p1_point.json", "0"),
        ("toric_p1_half_point.json", "0"),
        ("toric_p1xp1_ruling.json", "Z"),
    ):
        spec = parse_toric_spec(load_fixture(name))
        checks[f"class_group_{Path(name).stem}"] = str(tm.class_group(spec).result) == expected
    return checks


def cmd_selftest(job):
    checks = selftest_checks()
    return {"checks_run": sorted(checks)}, checks


# ----- driver ------------------------------------------------------------

def _read_input(job: JobSpec):
    if not job.input_path:
        raise InputError(f"{job.command} needs --input")
    try:
        return json.loads(Path(job.input_path).read_text())
    except FileNotFoundError as exc:
        raise InputError(f"input file {job.input_path} not found") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"input is not valid JSON: {exc}") from exc


def run(job: JobSpec) -> dict:
    """Run one job and return the report (raises InputError for rejected inputs)."""
    if job.command not in COMMANDS:
        raise InputError(f"unknown command {job.command!r}")
    start = time.perf_counter()
    if job.command == "selftest":
        results, verification = cmd_selftest(job)
    else:
        data = _read_input(job)
        if job.command in TORIC_COMMANDS:
            spec = parse_toric_spec(data)
            handler = {"msr-dim": cmd_msr_dim, "classgroup": cmd_classgroup, "factorial": cmd_factorial}[job.command]
            results, verification = handler(spec, job)
        else:
            ring = parse_ring_spec(data)
            if job.command == "roundtrip":
                results, verification = cmd_roundtrip(ring, job, data)
            else:
                handler = {
                    "chambers": cmd_chambers, "fan": cmd_fan, "rayideal": cmd_rayideal,
                    "compare": cmd_compare, "thm4": cmd_thm4, "one-chamber": cmd_thm4, "plot2d": cmd_plot2d,
                }[job.command]
                results, verification = handler(ring, job)
    report = {
        "command": job.command,
        "input": Path(job.input_path).name if job.input_path else None,
        "options": {"grid_bound": job.grid_bound, "samples": job.samples, "seed": job.seed, "points": list(job.points)},
        "results": results,
        "verification": {k: bool(v) for k, v in verification.items()},
    }
    report["ok"] = all(report["verification"].values())
    if job.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    jsonschema.validate(report, REPORT_SCHEMA)
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rayfan", description="Chambers, ray ideals and multi-section rings.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", "-i")
    p.add_argument("--output", "-o")
    p.add_argument("--grid-bound", type=int, default=6)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--point", action="append", default=[], help='rational vector "p/q,p/q" (repeatable)')
    p.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    p.add_argument("--verbose", "-v", action="store_true")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    job = JobSpec(args.command, args.input, args.output, args.grid_bound, args.samples, args.seed,
                  list(args.point), args.timing)
    try:
        report = run(job)
    except InputError as exc:
        for e in exc.errors:
            print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - report anything unexpected as an internal error
        log.exception("internal error: %s", exc)
        return 1
    text = dumps(report)
    if job.output_path and job.command != "plot2d":
        Path(job.output_path).write_text(text)
    elif job.output_path:
        Path(job.output_path).with_suffix(".json").write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if report["ok"] else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line entry point: ``tropinfl <subcommand> ...``.

Every subcommand prints text, JSON or SVG.  JSON carries a
``"schema": "tropinfl/1"`` tag and sorted keys, so identical
invocations give byte-identical output.  Exit status is 0 on success,
1 when a computed certificate fails and 2 when a hypothesis or the input
is rejected; the reason is printed in machine-readable form.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

from . import bounds as B
from .codes import CertificationFailed, Exhausted, Infeasible, LinearCode, TooLarge, build_code, min_distance_bruteforce
from .influence import PointNotOnCurve, influence_area, influence_set, tangent_cone
from .lattice import (
    LatticePolygon,
    area,
    convex_hull,
    lattice_length,
    minimal_lattice_width,
    rectangle,
    triangle,
    width_in_direction,
)
from .poly import Domain, Poly, parse_poly
from .position import WidthTooSmall, floor_points
from .puiseux import BaseField
from .render import render
from .solver import (
    curve_through,
    detropicalize_system,
    laurent_point,
    multiplicity_of,
    multiplicity_system,
)
from .tropical import DegenerateNewtonPolygon, EmptySupport, TropicalPolynomial, curve_complex, locate, tropicalize

SCHEMA = "tropinfl/1"


class Rejected(Exception):
    """A hypothesis or an input failed; exit status 2."""

    def __init__(self, kind: str, reason: str, data: dict | None = None):
        super().__init__(reason)
        self.kind = kind
        self.reason = reason
        self.data = data or {}


@dataclass
class RunConfig:
    subcommand: str
    inputs: dict = field(default_factory=dict)
    seed: int = 0
    prime: int = 32003
    format: str = "text"
    precision: str = "1e-9"


# ---------------------------------------------------------------- parsing


def parse_polygon(text: str) -> LatticePolygon:
    """A JSON file, ``triangle:d``, ``rect:WxH`` or inline vertices ``"0,0;2,0;0,2"``."""
    if os.path.exists(text):
        with open(text) as fh:
            return LatticePolygon.from_json(json.load(fh))
    kind, _, arg = text.partition(":")
    if kind in ("triangle", "tri"):
        return triangle(int(arg))
    if kind in ("rect", "rectangle"):
        w, _, h = arg.partition("x")
        return rectangle(int(w), int(h))
    pts = []
    for tok in text.replace(";", " ").split():
        x, _, y = tok.partition(",")
        pts.append((int(x), int(y)))
    if not pts:
        raise Rejected("bad_input", f"cannot read a polygon from {text!r}")
    return convex_hull(pts)


def parse_point(text: str) -> tuple[Fraction, Fraction]:
    x, _, y = text.partition(",")
    return Fraction(x), Fraction(y)


def parse_conditions(text: str) -> list[tuple[tuple[Fraction, Fraction], int]]:
    """``"x,y:m;x,y:m"``; a missing ``:m`` means multiplicity 1."""
    out = []
    for tok in text.split(";"):
        tok = tok.strip()
        if not tok:
            continue
        pt, _, m = tok.partition(":")
        out.append((parse_point(pt), int(m) if m else 1))
    return out


def parse_mults(text: str) -> list[int]:
    return [int(s) for s in text.replace(";", ",").split(",") if s.strip()]


def load_poly(text: str, domain: Domain) -> Poly | TropicalPolynomial:
    if os.path.exists(text):
        with open(text) as fh:
            data = json.load(fh)
        if "coeffs" in data:
            return TropicalPolynomial.from_json(data)
        return Poly.from_json(data)
    return parse_poly(text, domain)


def _target(args) -> LatticePolygon:
    if getattr(args, "polygon", None):
        return parse_polygon(args.polygon)
    if getattr(args, "degree", None) is not None:
        return triangle(args.degree)
    raise Rejected("bad_input", "give --polygon or --degree")


def _integral(p) -> tuple[int, int]:
    if any(Fraction(c).denominator != 1 for c in p):
        raise Rejected("bad_input", f"valuation point {tuple(map(str, p))} must be integral")
    return int(p[0]), int(p[1])


# ---------------------------------------------------------------- commands


def cmd_width(args, cfg: RunConfig) -> dict:
    poly = parse_polygon(args.polygon)
    w, u = minimal_lattice_width(poly)
    return {
        "ok": True,
        "polygon": poly.to_json(),
        "width": w,
        "direction": list(u),
        "width_horizontal": width_in_direction(poly, (1, 0)),
        "width_vertical": width_in_direction(poly, (0, 1)),
    }


def cmd_area(args, cfg: RunConfig) -> dict:
    poly = parse_polygon(args.polygon)
    boundary = sum(lattice_length(a, b) for a, b in poly.edges) if poly.dim == 2 else len(poly.lattice_points)
    return {
        "ok": True,
        "polygon": poly.to_json(),
        "area": str(area(poly)),
        "lattice_points": len(poly.lattice_points),
        "boundary_points": boundary,
        "interior_points": len(poly.lattice_points) - boundary,
    }


def _tropical(args) -> TropicalPolynomial:
    f = load_poly(args.poly, Domain.parse(args.domain))
    if isinstance(f, TropicalPolynomial):
        return f
    try:
        return tropicalize(f)
    except EmptySupport as exc:
        raise Rejected("empty_support", str(exc)) from exc


def _curve(tp: TropicalPolynomial):
    try:
        return curve_complex(tp)
    except DegenerateNewtonPolygon as exc:
        raise Rejected("degenerate_newton_polygon", str(exc)) from exc


def cmd_trop(args, cfg: RunConfig) -> dict:
    tp = _tropical(args)
    curve = _curve(tp)
    sub = curve.subdivision
    defects = curve.balancing_defects()
    cell_area = sum((c.area for c in sub.cells), Fraction(0))
    out = {
        "ok": not defects and cell_area == area(sub.polygon),
        "tropical_polynomial": tp.to_json(),
        "newton_polygon": sub.polygon.to_json(),
        "cells": [
            {"id": c.id, "points": [list(p) for p in c.points], "area": str(c.area),
             "vertex": [str(c.weight[0]), str(c.weight[1])]}
            for c in sub.cells
        ],
        "curve": curve.to_json(),
        "total_cell_area": str(cell_area),
        "polygon_area": str(area(sub.polygon)),
        "balancing_defects": {str(k): list(v) for k, v in defects.items()},
    }
    out["_svg"] = render(curve)
    return out


def cmd_infl(args, cfg: RunConfig) -> dict:
    domain = Domain.parse(args.domain)
    f = load_poly(args.poly, domain)
    tp = f if isinstance(f, TropicalPolynomial) else tropicalize(f)
    curve = _curve(tp)
    p = parse_point(args.point)
    loc = locate(curve, p)
    if not loc.on_curve:
        raise Rejected("point_not_on_curve", f"{args.point} is not on the tropical curve")
    infl = influence_set(p, curve)
    a = influence_area(p, curve)
    out = {
        "point": [str(c) for c in p],
        "location": {"kind": loc.kind, "index": loc.index},
        "tangent_cone_normals": len(tangent_cone(p, curve.polygon).normals),
        "influence": [
            {"vertex": v, "multiplicity": infl.multiplicity[v], "dual_area": str(curve.cell_of_vertex(v).area)}
            for v in infl.vertices
        ],
        "influence_area": str(a),
    }
    m = args.m
    if m is None and isinstance(f, Poly) and domain.laurent and all(c.denominator == 1 for c in p):
        m = multiplicity_of(f, laurent_point(int(p[0]), int(p[1]), domain.base))
        out["multiplicity_at_lift"] = m
    out["_svg"] = render(curve, [p], infl.multiplicity)
    if m is None:
        out["ok"] = True
        return out
    w, _ = minimal_lattice_width(curve.polygon)
    out["m"] = m
    out["width"] = w
    out["lower_bound"] = str(Fraction(m * m, 2))
    out["at_least_lower_bound"] = a >= Fraction(m * m, 2)
    if w < m:
        raise Rejected("hypothesis_failed", f"minimal lattice width {w} < multiplicity {m}", out)
    out["ok"] = out["at_least_lower_bound"]
    return out


def cmd_floor(args, cfg: RunConfig) -> dict:
    poly = parse_polygon(args.polygon)
    mults = parse_mults(args.m)
    base = BaseField.prime(cfg.prime)
    try:
        floor = floor_points(args.n, mults, poly)
    except WidthTooSmall as exc:
        raise Rejected("width_too_small", str(exc)) from exc
    image = floor.polygon
    mults = floor.config.mults
    laurent = Domain(base, laurent=True)
    conds = [(laurent_point(x, y, base), m) for (x, y), m in zip(floor.config.coords, mults)]
    res = curve_through(image, conds, laurent, seed=cfg.seed)
    system = multiplicity_system(image, conds, laurent)
    det = detropicalize_system(system, res.report)
    thm = B.theorem1_bound(mults, image)
    predicted_empty = thm.value is not None and area(image) < thm.value
    checks = {
        "theorem1_hypotheses": thm.holds,
        "detropicalization_preserves_rank": not det.exhausted,
        "consistent_with_theorem1": (res.report.kernel_dim == 0) if predicted_empty else True,
    }
    out = {
        "floor": floor.to_json(),
        "system_shape": list(system.shape),
        "laurent_rank": res.report.rank,
        "kernel_dim": res.report.kernel_dim,
        "curve_exists": res.found,
        "theorem1": thm.to_json(),
        "area": str(area(image)),
        "theorem1_predicts_no_curve": predicted_empty,
        "detropicalization": det.to_json(),
    }
    if res.found:
        curve = curve_complex(tropicalize(res.poly))
        out["curve"] = {"poly": str(res.poly), "exact_polygon": res.exact_polygon}
        try:
            fc = B.verify_floor_certificate(floor.config, curve, floor.line)
        except PointNotOnCurve as exc:
            raise Rejected("point_not_on_curve", str(exc)) from exc
        out["floor_certificate"] = fc.to_json()
        checks["floor_certificate"] = fc.ok
        if floor.general_position:
            bc = B.verify_influence_budget(floor.config, curve)
            out["budget_certificate"] = bc.to_json()
            checks["budget_certificate"] = bc.ok
        out["_svg"] = render(curve, floor.config.coords)
    out["checks"] = checks
    out["ok"] = all(checks.values())
    return out


def cmd_bounds(args, cfg: RunConfig) -> dict:
    mults = parse_mults(args.mults)
    if not mults or min(mults) < 0:
        raise Rejected("bad_input", "need a nonempty list of nonnegative multiplicities")
    precision = Fraction(cfg.precision)
    poly = parse_polygon(args.polygon) if args.polygon else None
    width = args.width
    if width is None and poly is not None:
        width = minimal_lattice_width(poly)[0]
    n = len(mults)
    table = {"quarter": B.BoundReport("quarter", {}, B.quarter_bound(mults)).to_json()}
    if width is not None:
        table["theorem1"] = B.theorem1_bound(mults, poly, width).to_json()
        if len(set(mults)) == 1:
            table["uniform"] = B.uniform_bound_report(n, mults[0], width).to_json()
    if len(set(mults)) == 1:
        table["degree"] = B.degree_bound(n, mults[0], precision).to_json()
    table["nagata_rhs"] = B.nagata_rhs(mults, precision).to_json()
    if args.degree is not None:
        table["expected_dimension"] = B.expected_dimension(args.degree, mults)
    if poly is not None:
        table["expected_dimension_polygon"] = B.expected_dimension_polygon(poly, mults)
        table["area"] = str(area(poly))
    failed = [k for k, v in table.items() if isinstance(v, dict) and not all(v["hypotheses"].values())]
    if args.strict and failed:
        raise Rejected("hypothesis_failed", "hypotheses fail for: " + ", ".join(failed))
    return {"ok": True, "mults": mults, "width": width, "bounds": table, "hypotheses_failed": failed}


def _conditions(args, domain: Domain):
    conds = parse_conditions(args.points)
    if domain.laurent:
        return [(laurent_point(*_integral(p), domain.base), m) for p, m in conds]
    return conds


def cmd_solve(args, cfg: RunConfig) -> dict:
    domain = Domain.parse(args.domain.replace("F_p", f"F_{cfg.prime}"))
    target = _target(args)
    conds = _conditions(args, domain)
    res = curve_through(target, conds, domain, seed=cfg.seed)
    rep = res.report
    expected = B.expected_dimension_polygon(target, [m for _, m in conds])
    out = {
        "ok": True,
        "domain": domain.name,
        "polygon": target.to_json(),
        "report": rep.to_json(),
        "actual_dimension": rep.kernel_dim - 1,
        "expected_dimension": expected,
        "curve": None if res.poly is None else str(res.poly),
    }
    return out


def cmd_detrop(args, cfg: RunConfig) -> dict:
    base = BaseField.prime(cfg.prime)
    domain = Domain(base, laurent=True)
    target = _target(args)
    system = multiplicity_system(target, _conditions(args, domain), domain)
    det = detropicalize_system(system)
    out = det.to_json()
    out["ok"] = not det.exhausted
    out["prime"] = cfg.prime
    if det.exhausted:
        out["reason"] = f"every a in 1..{cfg.prime - 1} drops the rank"
    return out


def cmd_code(args, cfg: RunConfig) -> dict:
    p = args.p if args.p is not None else cfg.prime
    try:
        code = build_code(rectangle(args.d, args.N), args.n, args.m, p)
    except (CertificationFailed, Exhausted) as exc:
        return {"ok": False, "reason": str(exc), "witness": getattr(exc, "witness", None)}
    if isinstance(code, Infeasible):
        raise Rejected("infeasible", f"{code.reason}: {code.feasibility}")
    out = {"ok": True, "code": code.to_json(), "_text": code.to_text()}
    if args.min_distance:
        try:
            out["min_distance"] = min_distance_bruteforce(code)
        except TooLarge as exc:
            out["min_distance"] = None
            out["min_distance_skipped"] = str(exc)
    return out


def cmd_check_code(args, cfg: RunConfig) -> dict:
    with open(args.file) as fh:
        text = fh.read()
    code = LinearCode.from_json(json.loads(text)) if text.lstrip().startswith("{") else LinearCode.from_text(text)
    return {"ok": True, "p": code.p, "length": code.length, "dimension": code.dimension, "rank": code.rank()}


# ---------------------------------------------------------------- plumbing


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "svg"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--prime", type=int, default=32003)
    common.add_argument("--precision", default="1e-9", help="tolerance for irrational bounds")
    common.add_argument("--out", help="write output to this file instead of stdout")

    ap = argparse.ArgumentParser(prog="tropinfl", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(fn=fn)
        return sp

    sp = add("width", cmd_width, "minimal lattice width of a polygon")
    sp.add_argument("polygon")
    sp = add("area", cmd_area, "area and lattice point counts")
    sp.add_argument("polygon")
    sp = add("trop", cmd_trop, "tropical curve and dual subdivision")
    sp.add_argument("poly", help="polynomial string or JSON file")
    sp.add_argument("--domain", default="Q[t,1/t]")
    sp = add("infl", cmd_infl, "influence set of a point")
    sp.add_argument("poly")
    sp.add_argument("point", help="x,y (rationals allowed)")
    sp.add_argument("--domain", default="Q[t,1/t]")
    sp.add_argument("--m", type=int, help="multiplicity to test area >= m^2/2 against")
    sp = add("floor", cmd_floor, "floor configuration pipeline and certificates")
    sp.add_argument("--polygon", default="rect:2x3")
    sp.add_argument("--n", type=int, default=6)
    sp.add_argument("--m", default="2", help="one multiplicity or a comma list")
    sp = add("bounds", cmd_bounds, "table of area and degree bounds")
    sp.add_argument("--mults", required=True)
    sp.add_argument("--polygon")
    sp.add_argument("--width", type=int)
    sp.add_argument("--degree", type=int)
    sp.add_argument("--strict", action="store_true", help="fail when any hypothesis fails")
    for name, fn, help_ in (
        ("solve", cmd_solve, "curves with prescribed point multiplicities"),
        ("detrop", cmd_detrop, "specialize t = a keeping the rank"),
    ):
        sp = add(name, fn, help_)
        sp.add_argument("--polygon")
        sp.add_argument("--degree", type=int)
        sp.add_argument("--points", required=True, help='"x,y:m;x,y:m"; valuations over Laurent rings')
        if name == "solve":
            sp.add_argument("--domain", default="Q", help="Q, F_p, F_p[t,1/t], ...")
    sp = add("code", cmd_code, "jet evaluation code on [0,d]x[0,N]")
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--N", type=int, default=3)
    sp.add_argument("--n", type=int, default=6)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--p", type=int, help="prime (defaults to --prime)")
    sp.add_argument("--min-distance", action="store_true")
    sp = add("check-code", cmd_check_code, "re-import an exported generator matrix")
    sp.add_argument("file")
    return ap


def _text(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for k in sorted(value):
        v = value[k]
        if isinstance(v, dict) and v:
            lines.append(f"{pad}{k}:")
            lines.extend(_text(v, indent + 1))
        else:
            lines.append(f"{pad}{k}: {json.dumps(v, sort_keys=True)}")
    return lines


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    inputs = {
        k: v for k, v in vars(args).items()
        if k not in ("fn", "subcommand", "format", "seed", "prime", "precision", "out")
    }
    cfg = RunConfig(args.subcommand, inputs, args.seed, args.prime, args.format, args.precision)
    header = {"schema": SCHEMA, "command": cfg.subcommand, "config": asdict(cfg)}
    try:
        result = args.fn(args, cfg)
        status = 0 if result.get("ok", True) else 1
    except Rejected as exc:
        result = {**exc.data, "ok": False, "error": {"kind": exc.kind, "reason": exc.reason}}
        status = 2
    except (ValueError, ZeroDivisionError) as exc:
        result = {"ok": False, "error": {"kind": type(exc).__name__, "reason": str(exc)}}
        status = 2
    svg = result.pop("_svg", None)
    plain = result.pop("_text", None)
    if cfg.format == "svg" and status != 2:
        if svg is None:
            result = {"ok": False, "error": {"kind": "no_figure", "reason": f"{cfg.subcommand} has no SVG output"}}
            status = 2
        else:
            _emit(svg, args.out)
            return status
    payload = {**header, **result}
    if cfg.format == "json" or (cfg.format == "svg" and status == 2):
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif plain is not None and status == 0:
        text = plain
    else:
        text = "\n".join(_text(payload)) + "\n"
    _emit(text, args.out)
    if status == 2 and args.out:
        sys.stderr.write(json.dumps(result["error"], sort_keys=True) + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())

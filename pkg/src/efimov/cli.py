"""Command-line front end: ``efimov {params,terms,scan,ratio}``.

All quantities are dimensionless: lengths in units of a0, cross sections in
units of 4 pi a0^2.  Exit codes are 0 on success, 2 for domain or
configuration errors, 3 for I/O failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass
from typing import List, Optional

import numpy as np

from . import radial, scattering, terms
from .errors import DomainError, EfimovError
from .radial import RadialNumerics

log = logging.getLogger("efimov")

FLOAT_FMT = "{:.12g}"
PUBLISHED_RATIO_COEFF = 2.6


@dataclass(frozen=True)
class SpeciesPreset:
    name: str
    mass_ratio: float
    notes: str = ""


PRESETS = {
    "Li7-Rb87": SpeciesPreset(
        "Li7-Rb87",
        87.0 / 7.0,
        "heavy 87Rb, light 7Li; interspecies Feshbach resonance near 649 G, width 175 G",
    ),
}


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    limit: float
    passed: bool


def _check(name, value, limit) -> Check:
    return Check(name, float(value), float(limit), bool(value < limit))


def validity_report(mass_ratio, ka0, k_im_a_plus=None, r0=None, big_r0=None) -> List[Check]:
    checks = [
        _check("ka0", ka0, 1.0),
        _check("born_oppenheimer_(m/M)ka0", ka0 / mass_ratio, 0.1),
    ]
    if k_im_a_plus is not None:
        checks.append(_check("k_abs_im_a_plus", k_im_a_plus, 0.1))
    if r0 is not None and big_r0 is not None:
        checks.append(Check("r0_le_R0", r0 - big_r0, 0.0, r0 <= big_r0))
    if big_r0 is not None:
        checks.append(_check("R0_over_a0", big_r0, 0.1))
    elif r0 is not None:
        checks.append(_check("r0_over_a0", r0, 0.1))
    for c in checks:
        if not c.passed:
            log.warning("validity: %s = %s (limit %s)", c.name, _fmt(c.value), _fmt(c.limit))
    return checks


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return FLOAT_FMT.format(float(v))
    return str(v)


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return float(FLOAT_FMT.format(v)) if math.isfinite(v) else None
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def render_csv(config: dict, validity: List[Check], columns: List[str], rows: List[list]) -> str:
    buf = io.StringIO()
    for key, value in config.items():
        buf.write(f"# config.{key} = {_fmt(value)}\n")
    for c in validity:
        flag = "pass" if c.passed else "warn"
        buf.write(f"# validity.{c.name} = {_fmt(c.value)} limit {_fmt(c.limit)} {flag}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def render_json(config: dict, validity: List[Check], columns: List[str], rows: List[list]) -> str:
    doc = {
        "config": _json_value(config),
        "validity": [_json_value(asdict(c)) for c in validity],
        "rows": [_json_value(dict(zip(columns, row))) for row in rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def read_csv(text: str):
    """Parse CSV emitted by this tool into ``(header_lines, columns, rows)``."""
    lines = text.splitlines()
    header = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if ln and not ln.startswith("#")]
    reader = csv.reader(body)
    columns = next(reader)
    rows = []
    for rec in reader:
        parsed = []
        for v in rec:
            try:
                parsed.append(float(v))
            except ValueError:
                parsed.append(v)
        rows.append(parsed)
    return header, columns, rows


def _emit(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _render(args, config, validity, columns, rows) -> str:
    render = render_json if args.format == "json" else render_csv
    return render(config, validity, columns, rows)


def _mass_ratio(args) -> float:
    if args.mass_ratio is not None:
        return terms.MassRatio(args.mass_ratio).value
    return PRESETS[args.preset].mass_ratio


def _numerics(args) -> RadialNumerics:
    return RadialNumerics(rho_min=args.rho_min, rho_max=args.rho_max, rel_tol=args.tol)


def _numerics_config(args) -> dict:
    return {"rho_min": args.rho_min, "rho_max": args.rho_max, "tol": args.tol}


def cmd_params(args) -> str:
    mr = _mass_ratio(args)
    up = radial.universal_params(mr, _numerics(args))
    doc = asdict(up)
    doc["preset"] = None if args.mass_ratio is not None else args.preset
    return json.dumps(_json_value(doc), indent=2) + "\n"


def _grid(lo, hi, points, log_spaced) -> np.ndarray:
    if not (points >= 2 and lo > 0 and hi > lo and math.isfinite(hi)):
        raise DomainError(f"malformed grid: lo={lo}, hi={hi}, points={points}")
    grid = np.geomspace(lo, hi, points) if log_spaced else np.linspace(lo, hi, points)
    # keep an exact rho = 1 so the antisymmetric threshold row appears
    grid[np.abs(grid - 1.0) < 1e-12] = 1.0
    return grid


def cmd_terms(args) -> str:
    mr = _mass_ratio(args)
    grid = _grid(args.rho_lo, args.rho_hi, args.rho_points, args.log)
    columns = ["rho", "branch", "g", "kappa_a0", "energy", "v"]
    rows = []
    for rho in grid:
        rho = float(rho)
        branches = [terms.Branch.PLUS]
        if rho >= 1:
            branches.append(terms.Branch.MINUS)
        for br in branches:
            tp = terms.term_point(br, rho, mr)
            rows.append([tp.rho, br.value, tp.g, tp.kappa_a0, tp.energy, tp.v])
    config = {
        "mass_ratio": mr,
        "rho_lo": args.rho_lo,
        "rho_hi": args.rho_hi,
        "rho_points": args.rho_points,
        "log": bool(args.log),
    }
    return _render(args, config, [], columns, rows)


def fig2_window(s0: float, periods: float = 1.25):
    """a0/a* limits spanning x in [-periods*pi, periods*pi]."""
    return math.exp(-periods * math.pi / s0), math.exp(periods * math.pi / s0)


def cmd_scan(args) -> str:
    mr = _mass_ratio(args)
    up = radial.universal_params(mr, _numerics(args))
    if args.fig2:
        lo, hi = fig2_window(up.s0)
        defaults = {"a0_min": lo, "a0_max": hi, "points": 1001, "ka0": 0.1, "eta_star": 0.1}
        for key, value in defaults.items():
            if getattr(args, key) is None:
                setattr(args, key, value)
        args.log = True
    else:
        defaults = {"a0_min": 0.01, "a0_max": 100.0, "points": 401, "ka0": 0.1, "eta_star": 0.1}
        for key, value in defaults.items():
            if getattr(args, key) is None:
                setattr(args, key, value)

    grid = _grid(args.a0_min, args.a0_max, args.points, args.log)
    points = scattering.scan(up, grid, args.eta_star, args.ka0)

    finite = [p for p in points if not p.pole]
    k_im = max((args.ka0 * abs(p.a_plus.imag) for p in finite), default=0.0)
    validity = validity_report(mr, args.ka0, k_im, args.r0, args.R0)

    columns = ["a0_over_astar", "x", "sigma_e", "sigma_r", "re_a_plus", "im_a_plus", "pole"]
    rows = [
        [p.a0_over_astar, p.x, p.sigma_e, p.sigma_r, p.a_plus.real, p.a_plus.imag, int(p.pole)]
        for p in points
    ]
    config = {
        "mass_ratio": mr,
        "s0": up.s0,
        "alpha": up.alpha,
        "beta": up.beta,
        "theta0": up.theta0,
        "a0_min": args.a0_min,
        "a0_max": args.a0_max,
        "points": args.points,
        "log": bool(args.log),
        "ka0": args.ka0,
        "eta_star": args.eta_star,
        "fig2": bool(args.fig2),
        **_numerics_config(args),
    }
    return _render(args, config, validity, columns, rows)


def cmd_ratio(args) -> str:
    mr = _mass_ratio(args)
    up = radial.universal_params(mr, _numerics(args))
    measured = scattering.peak_ratio(up, args.ka0, args.eta_star)
    predicted = PUBLISHED_RATIO_COEFF * args.ka0 / args.eta_star
    one_period = np.exp(np.linspace(-0.5 * math.pi, 0.5 * math.pi, 513) / up.s0)
    k_im = scattering.inelastic_validity(up, one_period, args.eta_star, args.ka0)
    validity = validity_report(mr, args.ka0, k_im)
    columns = ["ka0", "eta_star", "measured_ratio", "predicted_ratio", "rel_diff", "leading_order"]
    rows = [[
        args.ka0,
        args.eta_star,
        measured,
        predicted,
        measured / predicted - 1.0,
        up.beta * args.ka0 / args.eta_star,
    ]]
    config = {"mass_ratio": mr, **_numerics_config(args)}
    return _render(args, config, validity, columns, rows)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", choices=sorted(PRESETS), default="Li7-Rb87")
    common.add_argument("--mass-ratio", type=float, default=None,
                        help="heavy/light mass ratio M/m (overrides --preset)")
    common.add_argument("--rho-min", type=float, default=1e-4)
    common.add_argument("--rho-max", type=float, default=40.0)
    common.add_argument("--tol", type=float, default=1e-10, help="integrator relative tolerance")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--output", "-o", default=None, help="output path (default stdout)")

    parser = argparse.ArgumentParser(
        prog="efimov",
        description="Born-Oppenheimer atom-molecule scattering near Efimov resonances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("params", parents=[common], help="universal radial-law constants (JSON)")

    p = sub.add_parser("terms", parents=[common], help="molecular terms and radial potential")
    p.add_argument("--rho-lo", type=float, default=0.01)
    p.add_argument("--rho-hi", type=float, default=100.0)
    p.add_argument("--rho-points", type=int, default=201)
    p.add_argument("--log", action="store_true", help="log-spaced rho grid")

    p = sub.add_parser("scan", parents=[common], help="cross sections versus a0/a*")
    p.add_argument("--a0-min", type=float, default=None, help="in units of a*")
    p.add_argument("--a0-max", type=float, default=None, help="in units of a*")
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--log", action="store_true", help="log-spaced a0 grid")
    p.add_argument("--ka0", type=float, default=None)
    p.add_argument("--eta-star", type=float, default=None)
    p.add_argument("--fig2", action="store_true",
                   help="ka0 = eta* = 0.1 over 2.5 log periods, 1001 log-spaced points")
    p.add_argument("--r0", type=float, default=None, help="two-body range in units of a0")
    p.add_argument("--R0", type=float, default=None, help="heavy-heavy range in units of a0")

    p = sub.add_parser("ratio", parents=[common], help="elastic/inelastic peak ratio")
    p.add_argument("--ka0", type=float, default=0.1)
    p.add_argument("--eta-star", type=float, default=0.1)
    return parser


COMMANDS = {"params": cmd_params, "terms": cmd_terms, "scan": cmd_scan, "ratio": cmd_ratio}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        text = COMMANDS[args.command](args)
    except EfimovError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        _emit(text, args.output)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())

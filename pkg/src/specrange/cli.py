"""Command-line front door: scenario files in, JSON/CSV reports out.

Verbs: run, construct, sweep, criteria.  Exit codes: 0 success, 2 schema
error, 3 numerical failure, 4 certification or design failure.  All output
files are written atomically and only after the whole computation has
succeeded, so a failing run leaves no partial artifacts.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass

from . import __version__
from .classify import (NormalityVerdict, SplitVerdict, box_limited, classify,
                       hildebrandt_certificate, split_certificate,
                       support_extent)
from .config import (DEFAULT_MAX_DIM, DEFAULT_TOLERANCES, MAX_DIM_ENV,
                     Tolerances)
from .construct import build_counterexample
from .criteria import CriteriaParams, evaluate_all
from .exceptions import (CertificationError, DesignError, EmptySupportError,
                         SchemaError, SpecrangeError)
from .linalg import eig_general
from .model import (OperatorMatrix, PotentialSpec, SeededRandomPotential,
                    SumPotential, assemble)
from .numrange import NumericalRangeHull, compute_hull
from .scenario import (Scenario, atomic_write_text, dumps_canonical,
                       encode_potential, encode_scenario, load_scenario,
                       parse_scenario)


def resolve_max_dim(flag: int | None) -> int:
    if flag is not None:
        return int(flag)
    env = os.environ.get(MAX_DIM_ENV)
    if env is not None:
        return int(env)
    return DEFAULT_MAX_DIM


def _override_seed(spec: PotentialSpec, seed: int) -> PotentialSpec:
    if isinstance(spec, SeededRandomPotential):
        return dataclasses.replace(spec, seed=seed)
    if isinstance(spec, SumPotential):
        return SumPotential(tuple(_override_seed(t, seed) for t in spec.terms))
    return spec


def _apply_flags(sc: Scenario, args) -> Scenario:
    changes: dict = {}
    if getattr(args, "angles", None) is not None:
        changes["n_angles"] = args.angles
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    overrides = dict(sc.tolerance_overrides)
    if getattr(args, "tol_boundary", None) is not None:
        overrides["boundary_abs"] = args.tol_boundary
    if getattr(args, "tol_cert", None) is not None:
        overrides["cert_abs"] = args.tol_cert
    if overrides != dict(sc.tolerance_overrides):
        changes["tolerance_overrides"] = tuple(sorted(overrides.items()))
    return dataclasses.replace(sc, **changes) if changes else sc


def _tolerances(sc: Scenario) -> Tolerances:
    return DEFAULT_TOLERANCES.with_overrides(**sc.tolerance_dict())


# ---------------------------------------------------------------------------
# report assembly


def _spectrum_json(op: OperatorMatrix, tol: Tolerances) -> dict:
    pairs = eig_general(op, tol)
    return {
        "count": len(pairs),
        "eigenvalues": [
            {"value": [p.value.real, p.value.imag], "residual": p.residual}
            for p in pairs
        ],
    }


def _hull_json(hull: NumericalRangeHull) -> dict:
    return {
        "n_angles": hull.n_angles,
        "polygon": [[z.real, z.imag] for z in hull.polygon],
        "support_min": float(hull.supports.min()),
        "support_max": float(hull.supports.max()),
    }


def _classify_json(op: OperatorMatrix, hull: NumericalRangeHull,
                   tol: Tolerances) -> dict:
    records = []
    nu = op.provenance.box.nu if op.provenance is not None else 1
    for cls in classify(op, hull, tol):
        normality = hildebrandt_certificate(op, cls, tol=tol)
        split = split_certificate(op, cls, tol=tol)
        try:
            extent = [list(support_extent(cls, j)) for j in range(nu)]
            limited = box_limited(cls)
        except EmptySupportError:
            extent = None
            limited = None
        records.append({
            "value": [cls.pair.value.real, cls.pair.value.imag],
            "residual": cls.pair.residual,
            "boundary_distance": cls.boundary_distance,
            "is_boundary": cls.is_boundary,
            "normality_residual": cls.normality_residual,
            "normality": normality.value,
            "split_residual_re": cls.split_residual_re,
            "split_residual_im": cls.split_residual_im,
            "split": split.value,
            "support_size": int(len(cls.support_indices)),
            "support_extent": extent,
            "box_limited": limited,
        })
    certified = sum(
        1 for r in records
        if r["is_boundary"] and r["normality"] == "certified_normal"
        and r["split"] == "certified")
    return {
        "tol_boundary": tol.boundary(op.frobenius),
        "tol_cert": tol.cert(op.frobenius),
        "certified_boundary_count": certified,
        "records": records,
    }


def _hull_csv(hull: NumericalRangeHull) -> str:
    lines = ["theta,support,witness_re,witness_im"]
    for t, s, w in zip(hull.thetas, hull.supports, hull.witnesses):
        lines.append(f"{float(t)!r},{float(s)!r},{w.real!r},{w.imag!r}")
    return "\n".join(lines) + "\n"


def _spectrum_csv(op: OperatorMatrix, tol: Tolerances) -> str:
    lines = ["index,eig_re,eig_im,residual"]
    for i, p in enumerate(eig_general(op, tol)):
        lines.append(f"{i},{p.value.real!r},{p.value.imag!r},{p.residual!r}")
    return "\n".join(lines) + "\n"


@dataclass
class Execution:
    report: dict
    hull_csv: str | None = None
    spectrum_csv: str | None = None


def execute_scenario(sc: Scenario, max_dim: int = DEFAULT_MAX_DIM) -> Execution:
    """Run the analyses a scenario requests and build its report dict."""
    if sc.seed is not None:
        sc = dataclasses.replace(
            sc, potential=_override_seed(sc.potential, sc.seed))
    tol = _tolerances(sc)
    report: dict = {
        "tool": {"name": "specrange", "version": __version__},
        "scenario": encode_scenario(sc),
        "results": {},
    }
    out = Execution(report=report)
    needs_matrix = any(a in sc.analysis
                       for a in ("spectrum", "numrange", "classify"))
    op = assemble(sc.box, sc.potential, max_dim=max_dim) if needs_matrix else None
    hull = None
    if "numrange" in sc.analysis or "classify" in sc.analysis:
        hull = compute_hull(op, n_angles=sc.n_angles)
    if "spectrum" in sc.analysis:
        report["results"]["spectrum"] = _spectrum_json(op, tol)
        out.spectrum_csv = _spectrum_csv(op, tol)
    if "numrange" in sc.analysis:
        report["results"]["numrange"] = _hull_json(hull)
        out.hull_csv = _hull_csv(hull)
    if "classify" in sc.analysis:
        report["results"]["classify"] = _classify_json(op, hull, tol)
    if "criteria" in sc.analysis:
        crit = evaluate_all(sc.potential, sc.box.nu, sc.criteria)
        report["results"]["criteria"] = crit.to_json_dict(
            encode_potential(sc.potential))
    return out


def _write_outputs(sc: Scenario, ex: Execution, out_dir: str) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    written = []
    base = os.path.join(out_dir, sc.name)
    atomic_write_text(f"{base}.report.json", dumps_canonical(ex.report))
    written.append(f"{base}.report.json")
    if ex.hull_csv is not None:
        atomic_write_text(f"{base}.hull.csv", ex.hull_csv)
        written.append(f"{base}.hull.csv")
    if ex.spectrum_csv is not None:
        atomic_write_text(f"{base}.spectrum.csv", ex.spectrum_csv)
        written.append(f"{base}.spectrum.csv")
    return written


# ---------------------------------------------------------------------------
# verbs


def _cmd_run(args) -> int:
    sc = _apply_flags(load_scenario(args.scenario), args)
    ex = execute_scenario(sc, max_dim=resolve_max_dim(args.max_dim))
    for path in _write_outputs(sc, ex, args.out_dir):
        print(path)
    return 0


def _cmd_criteria(args) -> int:
    sc = _apply_flags(load_scenario(args.scenario), args)
    crit = evaluate_all(sc.potential, sc.box.nu, sc.criteria)
    doc = {
        "tool": {"name": "specrange", "version": __version__},
        "scenario": encode_scenario(sc),
        "criteria": crit.to_json_dict(encode_potential(sc.potential)),
    }
    os.makedirs(args.out_dir, exist_ok=True)
    path = os.path.join(args.out_dir, f"{sc.name}.criteria.json")
    atomic_write_text(path, dumps_canonical(doc))
    print(path)
    return 0


def _parse_zeros(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise SchemaError(f"--zeros must be comma-separated integers, got "
                          f"{text!r}", path="--zeros", where="cli.construct")


def _cmd_construct(args) -> int:
    zeros = _parse_zeros(args.zeros)
    tol = DEFAULT_TOLERANCES.with_overrides(
        boundary_abs=args.tol_boundary, cert_abs=args.tol_cert)
    n_angles = args.angles if args.angles is not None else 720
    build = build_counterexample(
        a=args.a, b=args.b, zero_sites=zeros, n_sites=args.n,
        n_angles=n_angles, tol=tol)
    name = args.name or f"counterexample_a{args.a:g}_b{args.b:g}"
    sc = Scenario(
        name=name, box=build.box, potential=build.potential,
        analysis=("spectrum", "numrange", "classify", "criteria"),
        n_angles=n_angles,
        tolerance_overrides=tuple(sorted(
            {k: v for k, v in (("boundary_abs", args.tol_boundary),
                               ("cert_abs", args.tol_cert))
             if v is not None}.items())),
        criteria=CriteriaParams(b_values=(args.b,), a_values=(args.a,)),
    )
    ex = execute_scenario(sc, max_dim=resolve_max_dim(args.max_dim))
    os.makedirs(args.out_dir, exist_ok=True)
    scenario_path = os.path.join(args.out_dir, f"{name}.scenario.json")
    atomic_write_text(scenario_path, dumps_canonical(encode_scenario(sc)))
    print(scenario_path)
    for path in _write_outputs(sc, ex, args.out_dir):
        print(path)
    lam = build.classification.pair.value
    print(f"certified boundary eigenvalue {lam.real!r} + {lam.imag!r}i "
          f"(target {args.a:g} + {args.b:g}i)")
    return 0


def _set_path(doc, dotted: str, value: float) -> None:
    parts = dotted.split(".")
    cur = doc
    for i, part in enumerate(parts):
        last = i == len(parts) - 1
        key: object = int(part) if part.lstrip("-").isdigit() else part
        try:
            if last:
                cur[key]  # must already exist: sweeps modify, never extend
                cur[key] = value
            else:
                cur = cur[key]
        except (KeyError, IndexError, TypeError):
            raise SchemaError(
                f"sweep parameter path {dotted!r} does not resolve at "
                f"segment {part!r}", path=dotted, where="cli.sweep")


def _cmd_sweep(args) -> int:
    sc0 = _apply_flags(load_scenario(args.scenario), args)
    raw = encode_scenario(sc0)
    steps = args.steps
    if steps < 0:
        raise SchemaError("--steps must be >= 0", path="--steps",
                          where="cli.sweep")
    if steps == 0:
        values = []
    elif steps == 1:
        values = [args.start]
    else:
        h = (args.stop - args.start) / (steps - 1)
        values = [args.start + i * h for i in range(steps)]

    max_dim = resolve_max_dim(args.max_dim)
    header = ("param,status,n_eigenvalues,eigenvalues,boundary_flags,"
              "certified_flags,error")
    lines = [header]
    for v in values:
        doc = json.loads(json.dumps(raw))
        try:
            _set_path(doc, args.param, v)
            sc = parse_scenario(doc)
            tol = _tolerances(sc)
            op = assemble(sc.box, sc.potential, max_dim=max_dim)
            hull = compute_hull(op, n_angles=sc.n_angles)
            recs = classify(op, hull, tol)
            eigs = ";".join(
                f"{c.pair.value.real!r} {c.pair.value.imag!r}" for c in recs)
            bflags = ";".join("1" if c.is_boundary else "0" for c in recs)
            cflags = ";".join(
                "1" if (c.is_boundary
                        and hildebrandt_certificate(op, c, tol=tol)
                        is NormalityVerdict.CERTIFIED_NORMAL
                        and split_certificate(op, c, tol=tol)
                        is SplitVerdict.CERTIFIED) else "0"
                for c in recs)
            lines.append(f"{v!r},ok,{len(recs)},{eigs},{bflags},{cflags},")
        except SpecrangeError as exc:
            msg = str(exc).replace("\n", " ").replace(",", ";")
            lines.append(f"{v!r},error,0,,,,{msg}")
    os.makedirs(args.out_dir, exist_ok=True)
    path = os.path.join(args.out_dir, f"{sc0.name}.sweep.csv")
    atomic_write_text(path, "\n".join(lines) + "\n")
    print(path)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-boundary", type=float, default=None,
                        help="absolute boundary-distance tolerance override")
    common.add_argument("--tol-cert", type=float, default=None,
                        help="absolute certification tolerance override")
    common.add_argument("--angles", type=int, default=None,
                        help="number of support-function angles")
    common.add_argument("--seed", type=int, default=None,
                        help="override the seed of seeded_random potentials")
    common.add_argument("--max-dim", type=int, default=None,
                        help=f"matrix dimension cap (default {DEFAULT_MAX_DIM}; "
                             f"env {MAX_DIM_ENV})")
    common.add_argument("--out-dir", default=".",
                        help="directory for output files (default: .)")

    parser = argparse.ArgumentParser(
        prog="specrange",
        description="Spectra, numerical ranges, and boundary-eigenvalue "
                    "certificates for truncated lattice operators with "
                    "complex potentials.")
    parser.add_argument("--version", action="version",
                        version=f"specrange {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", parents=[common],
                           help="run a scenario file, writing report files")
    p_run.add_argument("scenario", help="path to a scenario JSON file")
    p_run.set_defaults(func=_cmd_run)

    p_con = sub.add_parser("construct", parents=[common],
                           help="build a certified boundary-eigenvalue "
                                "counterexample and its replay scenario")
    p_con.add_argument("--a", type=float, required=True,
                       help="real part of the target eigenvalue (|a| > 2)")
    p_con.add_argument("--b", type=float, required=True,
                       help="imaginary part of the target eigenvalue (b > 0)")
    p_con.add_argument("--zeros", default="0",
                       help="comma-separated zero sites (default: 0)")
    p_con.add_argument("--n", type=int, default=101,
                       help="truncation site count (default: 101)")
    p_con.add_argument("--name", default=None, help="output basename")
    p_con.set_defaults(func=_cmd_construct)

    p_swp = sub.add_parser("sweep", parents=[common],
                           help="grid-sweep one scalar scenario parameter")
    p_swp.add_argument("scenario", help="path to a scenario JSON file")
    p_swp.add_argument("--param", required=True,
                       help="dotted path into the scenario JSON, e.g. "
                            "potential.params.b_odd or potential.params.c.1")
    p_swp.add_argument("--from", dest="start", type=float, required=True)
    p_swp.add_argument("--to", dest="stop", type=float, required=True)
    p_swp.add_argument("--steps", type=int, required=True)
    p_swp.set_defaults(func=_cmd_sweep)

    p_cri = sub.add_parser("criteria", parents=[common],
                           help="evaluate the absence criteria only")
    p_cri.add_argument("scenario", help="path to a scenario JSON file")
    p_cri.set_defaults(func=_cmd_criteria)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except (DesignError, CertificationError) as exc:
        print(f"certification error: {exc}", file=sys.stderr)
        return 4
    except SpecrangeError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"schema error: cannot read scenario file: {exc}",
              file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())

"""Batch command-line front end.

Subcommands:
  list        catalog example ids with one-line descriptions
  check       condition-system residuals for a catalog example
  verify-sl   independent calibration check of the built immersion
  validate    construction-hypothesis residuals for an example
  identities  the symmetric-polynomial/adjugate identity suite
  span        singular-span test / shape classification from a JSON file
  prolong     tableau prolongation dimension from a JSON file
  export      CSV point cloud of the immersion with residual columns

Exit codes: 0 pass, 1 fail, 2 usage error, 3 inconclusive.  Reports are JSON
with stable condition names; identical arguments and seeds yield identical
reports apart from the wall_time field.  Angles are radians everywhere.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

import numpy as np

from . import austere, catalog, linclass, polyalg, slag
from .report import CheckReport

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="conormal",
        description="verification toolkit for twisted conormal-bundle "
        "special Lagrangian constructions",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list catalog example ids")

    def example_args(sp, fiber=False):
        sp.add_argument("--example", required=True, choices=catalog.EXAMPLE_IDS)
        sp.add_argument("--params", help="JSON file with example parameters")
        sp.add_argument("--theta", type=float, help="phase angle in radians")
        sp.add_argument("--samples", type=int,
                        help="approximate number of base sample points")
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--report", help="write the JSON report here")

    example_args(sub.add_parser("check", help="twisted-austere conditions"))
    example_args(sub.add_parser("verify-sl", help="calibration residuals"))
    vp = sub.add_parser("validate", help="construction hypotheses")
    vp.add_argument("--example", required=True, choices=catalog.EXAMPLE_IDS)
    vp.add_argument("--params")
    vp.add_argument("--seed", type=int)
    vp.add_argument("--report")

    ip = sub.add_parser("identities", help="identity suite")
    ip.add_argument("--k", type=int, default=3)
    ip.add_argument("--trials", type=int, default=1000)
    ip.add_argument("--seed", type=int, default=42)
    ip.add_argument("--report")

    spn = sub.add_parser("span", help="singular symmetric spans")
    spn.add_argument("mode", choices=("check", "classify"))
    spn.add_argument("--input", required=True,
                     help="JSON array of symmetric matrices")
    spn.add_argument("--report")

    pr = sub.add_parser("prolong", help="tableau prolongation")
    pr.add_argument("--input", required=True, help="JSON tableau description")
    pr.add_argument("--report")

    ep = sub.add_parser("export", help="CSV point cloud with residuals")
    ep.add_argument("--example", required=True, choices=catalog.EXAMPLE_IDS)
    ep.add_argument("--params")
    ep.add_argument("--theta", type=float)
    ep.add_argument("--samples", type=int)
    ep.add_argument("--seed", type=int)
    ep.add_argument("--csv", required=True)
    return p


def _load_params(path):
    if not path:
        return None
    with open(path) as fh:
        return json.load(fh)


def _instance(args):
    inst = catalog.instantiate(args.example, _load_params(args.params))
    theta = args.theta if getattr(args, "theta", None) is not None else inst.theta
    spec = inst.sample_default
    if getattr(args, "seed", None) is not None:
        spec = _respec(spec, seed=args.seed)
    if getattr(args, "samples", None):
        spec = spec.with_base_total(args.samples)
    return inst, theta, spec


def _respec(spec, **kw):
    from dataclasses import replace

    return replace(spec, **kw)


def _emit(report: CheckReport, args, argv) -> int:
    report.command = list(argv)
    print("\n".join(report.summary_lines()))
    if getattr(args, "report", None):
        with open(args.report, "w") as fh:
            fh.write(report.to_json())
            fh.write("\n")
    if report.verdict == "pass":
        return EXIT_PASS
    if report.verdict == "inconclusive":
        return EXIT_INCONCLUSIVE
    return EXIT_FAIL


def run(argv) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_PASS

    start = time.perf_counter()
    try:
        if args.command == "list":
            for ex_id in catalog.EXAMPLE_IDS:
                inst = catalog.instantiate(ex_id)
                print(f"{ex_id:22s} {inst.provenance}")
            return EXIT_PASS

        if args.command == "check":
            inst, theta, spec = _instance(args)
            phase = austere.PhaseSpec(theta=theta, n=inst.chart.dim_n,
                                      k=inst.chart.dim_k)
            report = austere.check_pair(inst.chart, inst.mu, phase, spec,
                                        tol=args.tol)
        elif args.command == "verify-sl":
            inst, theta, spec = _instance(args)
            report = slag.verify_special_lagrangian(inst.chart, inst.mu, theta,
                                                    spec, tol=args.tol)
        elif args.command == "validate":
            inst = catalog.instantiate(args.example, _load_params(args.params))
            spec = inst.sample_default
            if args.seed is not None:
                spec = _respec(spec, seed=args.seed)
            report = catalog.validate_inputs(inst, spec)
        elif args.command == "identities":
            report = polyalg.identity_suite(args.k, args.trials, args.seed)
        elif args.command == "span":
            report = _run_span(args)
        elif args.command == "prolong":
            report = _run_prolong(args)
        elif args.command == "export":
            return _run_export(args)
        else:  # pragma: no cover
            return EXIT_USAGE
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    report.wall_time = time.perf_counter() - start
    return _emit(report, args, argv)


def _run_span(args) -> CheckReport:
    with open(args.input) as fh:
        mats = json.load(fh)
    span = linclass.SymSpan.from_matrices([np.array(m, dtype=float) for m in mats])
    singular, certificate = linclass.is_singular_span(span)
    notes = {"dim": span.dim, "singular": singular}
    verdict = "pass" if singular else "fail"
    if certificate:
        notes["certificate"] = {
            "indices": list(certificate["indices"]),
            "value": float(certificate["value"]),
        }
    if args.mode == "classify":
        try:
            kind, rotation, resid = linclass.classify_singular_3span(span)
            notes.update({
                "shape": kind,
                "rotation": rotation.tolist(),
                "shape_residual": resid,
            })
            verdict = "pass"
        except (ValueError, linclass.ClassificationError) as exc:
            notes["classification_error"] = str(exc)
            verdict = "fail"
    return CheckReport(title=f"span {args.mode}", conditions=[],
                       verdict=verdict, notes=notes)


def _run_prolong(args) -> CheckReport:
    with open(args.input) as fh:
        desc = json.load(fh)
    if "builtin" in desc:
        name = desc["builtin"]
        if name == "full_quadratic":
            tab = linclass.full_quadratic_tableau(int(desc["n"]))
        elif name == "off_diagonal_block":
            tab = linclass.off_diagonal_block_tableau(int(desc["p"]), int(desc["q"]))
        elif name == "traceless_axis":
            tab = linclass.Tableau.from_symmetric_matrices(
                linclass.traceless_axis_basis()
            )
        else:
            raise ValueError(f"unknown builtin tableau '{name}'")
    elif "symmetric_matrices" in desc:
        tab = linclass.Tableau.from_symmetric_matrices(
            [np.array(m, dtype=float) for m in desc["symmetric_matrices"]]
        )
    else:
        tab = linclass.Tableau(
            V_dim=int(desc["V_dim"]),
            W_dim=int(desc["W_dim"]),
            order=int(desc["order"]),
            basis=[np.array(b, dtype=float) for b in desc["basis"]],
        )
    dim, _ = linclass.prolongation(tab)
    return CheckReport(
        title="tableau prolongation", conditions=[], verdict="pass",
        notes={"dimension": dim, "V_dim": tab.V_dim, "W_dim": tab.W_dim,
               "order": tab.order, "input_dim": len(tab.basis)},
    )


def _run_export(args) -> int:
    inst, theta, spec = _instance(args)
    n = inst.chart.dim_n
    k = inst.chart.dim_k
    header = (
        [f"u{a}" for a in range(k)]
        + [f"t{j}" for j in range(n - k)]
        + [f"x{i}" for i in range(n)]
        + [f"y{i}" for i in range(n)]
        + ["lagrangian_resid", "phase_resid"]
    )
    count = 0
    with open(args.csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for res in slag.sample_rows(inst.chart, inst.mu, theta, spec):
            writer.writerow(
                [f"{v:.17g}" for v in res.point_base]
                + [f"{v:.17g}" for v in res.point_fiber]
                + [f"{v:.17g}" for v in res.x]
                + [f"{v:.17g}" for v in res.y]
                + [f"{res.lagrangian:.17g}", f"{res.phase:.17g}"]
            )
            count += 1
    print(f"wrote {count} points to {args.csv}")
    return EXIT_PASS


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

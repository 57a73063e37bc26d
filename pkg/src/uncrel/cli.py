"""Command-line front end: sweep, check, search, box, report.

Exit codes: 0 success, 1 usage or input error, 2 a universal relation was
violated (that signals a defect in this package, never physics, so CI can
hard-fail on it).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import box as boxmod
from . import modelio, relations, search as searchmod, spin
from .models import ModelValidationError, ProjectiveModel, dilate
from .operators import StateVector

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNIVERSAL_VIOLATION = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage problems; 2 is reserved here for
    # universal-relation violations, so downgrade usage errors to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self._fail(message))

    def _fail(self, message):
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        return EXIT_ERROR


def _fmt(value: float) -> str:
    return format(value, ".17g")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="uncrel",
        description="Simulate finite-dimensional measurement models and "
        "verify the uncertainty-relation catalog.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="detuning-angle sweep with CSV, plot script, figures")
    p_sweep.add_argument("--steps", type=int, default=65, help="grid points, endpoints included")
    p_sweep.add_argument("--out", default="sweep.csv", help="output CSV path")
    p_sweep.add_argument("--plot", default="fig.plt", help="output gnuplot script path")
    p_sweep.add_argument("--figdir", default=None,
                         help="directory for rendered PNG figures (default: next to CSV)")

    p_check = sub.add_parser("check", help="evaluate relations for a model file")
    p_check.add_argument("--model", required=True, help="model JSON file")
    p_check.add_argument("--state", default="0",
                         help="basis index or JSON state file (default 0)")
    p_check.add_argument("--relations", default="all", dest="relation_ids",
                         help="comma-separated relation ids or 'all'")
    p_check.add_argument("--format", choices=("csv", "structured"), default="csv")
    p_check.add_argument("--out", default=None, help="write output here instead of stdout")

    p_search = sub.add_parser("search", help="randomized violation search")
    p_search.add_argument("--target", required=True, help="relation id to attack")
    p_search.add_argument("--trials", type=int, default=1000)
    p_search.add_argument("--seed", type=int, default=42)
    p_search.add_argument("--refine-steps", type=int, default=0)
    p_search.add_argument("--perturbation-scale", type=float, default=0.05)
    p_search.add_argument("--dims", default="2:4,2:4",
                          help="system and apparatus dimension ranges, e.g. 2:4,2:4")
    p_search.add_argument("--inject-spin", type=float, default=None, metavar="PHI",
                          help="use the spin model at this detuning angle as trial 0")
    p_search.add_argument("--out", required=True, help="witness output directory")

    p_box = sub.add_parser("box", help="periodic-box spread-product check")
    p_box.add_argument("--profile", action="append", default=[],
                       help="plane:<mode> or gaussian:<width>[:<center>]; repeatable")
    p_box.add_argument("--state-file", action="append", default=[],
                       help="sampled wavefunction file; repeatable")
    p_box.add_argument("--L", type=float, default=1.0, dest="box_length")
    p_box.add_argument("--grid", type=int, default=1024)
    p_box.add_argument("--hbar", type=float, default=1.0)
    p_box.add_argument("--out", default="box.csv", help="output CSV path")

    p_report = sub.add_parser("report", help="overlay data points on sweep curves")
    p_report.add_argument("--in", dest="sweep_csv", required=True, help="sweep CSV")
    p_report.add_argument("--data", required=True, help="data-point CSV")
    p_report.add_argument("--figdir", default=None,
                          help="directory for the overlay figure (default: next to CSV)")
    return parser


def _run_sweep(args) -> int:
    if args.steps < 2:
        print("uncrel sweep: error: --steps must be at least 2", file=sys.stderr)
        return EXIT_ERROR
    try:
        rows = spin.sweep(args.steps)
    except spin.SweepAgreementError as exc:
        print(f"uncrel sweep: {exc}", file=sys.stderr)
        return EXIT_ERROR
    spin.emit_csv(rows, args.out)
    spin.emit_plot_script(args.out, args.plot)

    from . import figures

    figdir = args.figdir or (os.path.dirname(os.path.abspath(args.out)) or ".")
    os.makedirs(figdir, exist_ok=True)
    stem = os.path.splitext(os.path.basename(args.out))[0]
    bounds_png = os.path.join(figdir, f"{stem}_bounds.png")
    ratios_png = os.path.join(figdir, f"{stem}_ratios.png")
    figures.render_sweep_figures(rows, bounds_png, ratios_png)

    problems = spin.check_sweep_invariants(rows)
    if problems:
        for problem in problems:
            print(f"uncrel sweep: INVARIANT VIOLATED: {problem}", file=sys.stderr)
        return EXIT_UNIVERSAL_VIOLATION
    print(f"wrote {len(rows)} rows to {args.out}; plot script {args.plot}; "
          f"figures {bounds_png}, {ratios_png}")
    return EXIT_OK


def _resolve_state(spec: str, dim: int) -> StateVector:
    if os.path.exists(spec):
        return modelio.load_state(spec)
    try:
        index = int(spec)
    except ValueError:
        raise modelio.ModelFormatError(
            f"field 'state': {spec!r} is neither a file nor a basis index"
        ) from None
    return StateVector.basis(dim, index)


def _run_check(args) -> int:
    try:
        model = modelio.load_model(args.model)
        if isinstance(model, ProjectiveModel):
            model = dilate(model)
        psi = _resolve_state(args.state, model.layout.dim_system)
        if args.relation_ids.strip() == "all":
            ids = relations.RELATION_IDS
        else:
            ids = tuple(part.strip() for part in args.relation_ids.split(",") if part.strip())
            for rid in ids:
                relations.describe(rid)
        quantities = relations.quantities(model, psi)
        reports = relations.evaluate_many(quantities, ids)
    except (ModelValidationError, modelio.ModelFormatError, FileNotFoundError,
            ValueError) as exc:
        print(f"uncrel check: {exc}", file=sys.stderr)
        return EXIT_ERROR

    if args.format == "csv":
        lines = [relations.CSV_HEADER]
        lines += [relations.report_row(report) for report in reports]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps([relations.report_to_doc(r) for r in reports], indent=1) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)

    broken = [r for r in reports if relations.is_universal(r.relation_id) and not r.satisfied]
    if broken:
        for report in broken:
            print(f"uncrel check: UNIVERSAL RELATION VIOLATED: {report.relation_id} "
                  f"slack={_fmt(report.slack)}", file=sys.stderr)
        return EXIT_UNIVERSAL_VIOLATION
    return EXIT_OK


def _parse_dims(text: str) -> tuple[tuple[int, int], tuple[int, int]]:
    try:
        first, second = text.split(",")
        s_lo, s_hi = (int(v) for v in first.split(":"))
        a_lo, a_hi = (int(v) for v in second.split(":"))
    except ValueError:
        raise ValueError(f"bad --dims {text!r}, expected like 2:4,2:4") from None
    return (s_lo, s_hi), (a_lo, a_hi)


def _run_search(args) -> int:
    try:
        dim_system, dim_apparatus = _parse_dims(args.dims)
        config = searchmod.SearchConfig(
            target=args.target,
            trials=args.trials,
            seed=args.seed,
            dim_system=dim_system,
            dim_apparatus=dim_apparatus,
            refine_steps=args.refine_steps,
            perturbation_scale=args.perturbation_scale,
            inject_spin_phi=args.inject_spin,
        )
    except ValueError as exc:
        print(f"uncrel search: {exc}", file=sys.stderr)
        return EXIT_ERROR

    witnesses = searchmod.search(config)
    os.makedirs(args.out, exist_ok=True)
    summary_path = os.path.join(args.out, "summary.csv")
    with open(summary_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("rank,trial_index,relation_id,lhs,rhs,slack,margin,file\n")
        for rank, witness in enumerate(witnesses):
            filename = f"witness_{rank:04d}.json"
            modelio.dump_json(
                modelio.witness_to_doc(
                    witness.model, witness.state, witness.report, witness.trial_index
                ),
                os.path.join(args.out, filename),
            )
            handle.write(
                ",".join(
                    (
                        str(rank),
                        str(witness.trial_index),
                        witness.report.relation_id,
                        _fmt(witness.report.lhs),
                        _fmt(witness.report.rhs),
                        _fmt(witness.report.slack),
                        _fmt(witness.margin),
                        filename,
                    )
                )
                + "\n"
            )
    print(f"{len(witnesses)} witness(es) for {args.target} out of {args.trials} trials; "
          f"summary at {summary_path}")
    if witnesses and relations.is_universal(args.target):
        print(f"uncrel search: UNIVERSAL RELATION VIOLATED: {args.target}",
              file=sys.stderr)
        return EXIT_UNIVERSAL_VIOLATION
    return EXIT_OK


def _parse_profile(text: str, box_length: float, grid: int, hbar: float):
    parts = text.split(":")
    kind = parts[0]
    if kind == "plane" and len(parts) == 2:
        return boxmod.make_plane_wave(int(parts[1]), box_length, grid, hbar=hbar)
    if kind == "gaussian" and len(parts) in (2, 3):
        width = float(parts[1])
        center = float(parts[2]) if len(parts) == 3 else 0.0
        return boxmod.make_wrapped_gaussian(width, center, box_length, grid, hbar=hbar)
    raise ValueError(f"bad --profile {text!r}, expected plane:<mode> or gaussian:<width>[:<center>]")


def _run_box(args) -> int:
    if not args.profile and not args.state_file:
        print("uncrel box: error: need at least one --profile or --state-file",
              file=sys.stderr)
        return EXIT_ERROR
    states = []
    try:
        for profile in args.profile:
            states.append((profile, _parse_profile(profile, args.box_length, args.grid, args.hbar)))
        for path in args.state_file:
            states.append((os.path.basename(path), boxmod.load_wavefunction(path)))
    except (boxmod.WavefunctionError, ValueError, FileNotFoundError) as exc:
        print(f"uncrel box: {exc}", file=sys.stderr)
        return EXIT_ERROR

    s_values = np.linspace(-10.0, 10.0, 101)
    rows = []
    worst_quadratic = float("inf")
    any_unsatisfied = False
    for state_id, wave in states:
        m = boxmod.moments(wave)
        report = boxmod.check36(wave)
        sweep_min = float(boxmod.quadratic_form_sweep(wave, s_values).min())
        worst_quadratic = min(worst_quadratic, sweep_min)
        any_unsatisfied = any_unsatisfied or not report.satisfied
        rows.append((state_id, m.dev_x, m.dev_p, report.lhs, report.rhs, report.satisfied))

    with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("state_id,devX,devP,lhs,rhs,satisfied\n")
        for state_id, dev_x, dev_p, lhs, rhs, ok in rows:
            handle.write(
                f"{state_id},{_fmt(dev_x)},{_fmt(dev_p)},{_fmt(lhs)},{_fmt(rhs)},"
                f"{'true' if ok else 'false'}\n"
            )
    print(f"wrote {len(rows)} state row(s) to {args.out}; "
          f"quadratic-form sweep minimum {_fmt(worst_quadratic)}")
    if any_unsatisfied or worst_quadratic < -1e-10:
        print("uncrel box: UNIVERSAL RELATION VIOLATED: KR36", file=sys.stderr)
        return EXIT_UNIVERSAL_VIOLATION
    return EXIT_OK


def _run_report(args) -> int:
    try:
        rows = spin.read_csv(args.sweep_csv)
        points = spin.ingest(args.data)
    except (spin.IngestError, FileNotFoundError) as exc:
        print(f"uncrel report: {exc}", file=sys.stderr)
        return EXIT_ERROR
    summary = spin.overlay(rows, points)
    print(f"{len(summary.rows)} data point(s) compared")
    for row in summary.rows:
        print(f"  phi={_fmt(row.phi)} {row.quantity_id}: value={_fmt(row.value)} "
              f"reference={_fmt(row.reference)} residual={_fmt(row.residual)}")
    print(f"max |residual| = {_fmt(summary.max_abs_residual)}")
    print(f"mean |residual| = {_fmt(summary.mean_abs_residual)}")

    if summary.rows:
        from . import figures

        figdir = args.figdir or (os.path.dirname(os.path.abspath(args.sweep_csv)) or ".")
        os.makedirs(figdir, exist_ok=True)
        stem = os.path.splitext(os.path.basename(args.sweep_csv))[0]
        overlay_png = os.path.join(figdir, f"{stem}_overlay.png")
        figures.render_overlay_figure(rows, summary.rows, overlay_png)
        print(f"overlay figure at {overlay_png}")
    return EXIT_OK


_HANDLERS = {
    "sweep": _run_sweep,
    "check": _run_check,
    "search": _run_search,
    "box": _run_box,
    "report": _run_report,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    return _HANDLERS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())

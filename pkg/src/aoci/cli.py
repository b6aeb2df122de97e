"""Command-line interface: evaluate, sweep, reproduce figures, validate.

Exit codes: 0 success, 1 validation-suite failure, 2 configuration error,
3 numerical failure under --strict. All output is deterministic for fixed
inputs and seed; no timestamps are embedded anywhere.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

from aoci import kpi, photometry
from aoci.config import ConfigError, LinkConfig
from aoci.figures import FIGURE_NUMBERS, load_preset, run_figure
from aoci.specfun import NumericalError
from aoci.sweep import SweepSpec, run_sweep, write_csv
from aoci.validate import run_validation

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aoci",
        description="Transdermal optical link-budget model: evaluation, sweeps, "
        "figure presets, and the validation suite.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one configuration end to end")
    p_eval.add_argument("--config", required=True, help="link configuration JSON")
    p_eval.add_argument(
        "--method",
        default="auto",
        choices=["auto", "series", "quadrature", "mc"],
        help="average-flux evaluation route (default: auto)",
    )
    p_eval.add_argument("--samples", type=int, default=100_000, help="Monte Carlo samples")
    p_eval.add_argument("--seed", type=int, default=1234, help="Monte Carlo seed")
    p_eval.add_argument("--out", default=None, help="directory for eval.csv")
    p_eval.add_argument(
        "--strict",
        action="store_true",
        help="fail (exit 3) instead of falling back when the requested method "
        "does not converge",
    )

    p_sweep = sub.add_parser("sweep", help="evaluate a metric over a parameter grid")
    p_sweep.add_argument("--config", required=True, help="link configuration JSON")
    p_sweep.add_argument("--sweep", required=True, help="sweep specification JSON")
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument("--svg", action="store_true", help="also render an SVG plot")

    p_fig = sub.add_parser("figure", help="reproduce a bundled figure preset")
    p_fig.add_argument("number", type=int, choices=FIGURE_NUMBERS, help="figure number")
    p_fig.add_argument("--config", default=None, help="override the bundled preset config")
    p_fig.add_argument("--out", required=True, help="output directory")
    p_fig.add_argument("--samples", type=int, default=20_000, help="Monte Carlo samples per point")
    p_fig.add_argument("--seed", type=int, default=1234, help="Monte Carlo seed")

    p_val = sub.add_parser("validate", help="run the oracle-equivalence suite")
    p_val.add_argument("--quick", action="store_true", help="reduced grids, ~30 s")

    return parser


def _mm(v: float) -> str:
    return f"{v * 1e3:.6g} mm"


def _mw_per_mm2(v: float) -> str:
    return f"{v * 1e-3:.6g} mW/mm^2"


def _cmd_eval(args) -> int:
    cfg = LinkConfig.from_file(args.config)
    state = photometry.derive_state(cfg)

    print(f"config: {args.config} (hash {cfg.config_hash()})")
    print("derived channel state:")
    print(f"  path gain h_l          = {state.h_l:.6g}")
    print(f"  beam radius w_delta    = {_mm(state.w_delta)}")
    print(f"  aperture ratio upsilon = {state.upsilon:.6g}")
    print(f"  equivalent width w_eq  = {_mm(state.w_eq)}")
    print(f"  peak collection A0     = {state.a0:.6g}")
    print(f"  collimation gain G_c   = {state.g_c:.6g}")
    print(f"  fiber efficiency k     = {state.k:.6g}")
    print(f"  coupling argument a    = {state.coupling_argument:.6g}")

    try:
        flux = photometry.mean_flux(cfg, method=args.method, n=args.samples, seed=args.seed)
        fell_back = args.method == "series" and flux.method != "series"
    except NumericalError as exc:
        if args.strict:
            print(
                f"numerical failure in method {args.method!r}: {exc}\n"
                "fallback: rerun with --method quadrature",
                file=sys.stderr,
            )
            return EXIT_NUMERICAL
        flux = photometry.mean_flux_quadrature(cfg)
        fell_back = True
    if args.method == "series" and args.strict and flux.method != "series":
        print(
            "series route did not converge for this configuration; "
            "fallback: rerun with --method quadrature",
            file=sys.stderr,
        )
        return EXIT_NUMERICAL

    print("average photon flux:")
    print(f"  method    = {flux.method}" + ("  (fell back from series)" if fell_back else ""))
    print(f"  value     = {flux.value:.6e} photons/s")
    print(f"  err bound = {flux.err_bound:.3e}")
    if flux.method == "monte_carlo":
        print(f"  samples   = {flux.n_samples}, seed = {flux.seed}")

    gain = photometry.response_window_gain(cfg.neural.tau)
    budget = photometry.link_budget(cfg, flux)
    print("link budget over one response window:")
    print(f"  signal counts    = {flux.value * gain:.6e}")
    print(f"  background counts= {cfg.neural.mean_background:.6g}")
    print(f"  total            = {budget:.6e}")

    report = kpi.kpi_report(cfg, n=args.samples, seed=args.seed)
    ph, pd_ = report.p_hearing, report.p_damage
    fh = report.p_false_hearing
    print(f"indicators (n={args.samples}, seed={args.seed}):")
    print(f"  p_hearing        = {ph.value:.4f}  [95% CI {ph.ci_low:.4f}, {ph.ci_high:.4f}]")
    print(
        f"  p_false_hearing  = {fh.literal:.6g} (survival reading); "
        f"{fh.cdf_closed_form:.6g} (CDF closed form)"
    )
    print(f"  p_damage         = {pd_.value:.4f}  [95% CI {pd_.ci_low:.4f}, {pd_.ci_high:.4f}]")
    skin_state = "ok" if report.mpe_skin_ok else "EXCEEDED"
    neuron_state = "ok" if report.mpe_neuron_ok else "EXCEEDED"
    print(
        f"  skin irradiance  = {_mw_per_mm2(report.skin_irradiance)} "
        f"(limit {_mw_per_mm2(cfg.mpe_skin)}, {skin_state})"
    )
    print(
        f"  neuron irradiance= {_mw_per_mm2(report.neuron_irradiance)} "
        f"(limit {_mw_per_mm2(cfg.mpe_neuron)}, {neuron_state})"
    )
    if report.dynamic_range_w is None:
        print("  dynamic range    = empty (hearing target unreachable within exposure limits)")
    else:
        lo, hi = report.dynamic_range_w
        print(f"  dynamic range    = [{lo * 1e3:.4g} mW, {hi * 1e3:.4g} mW]")

    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "eval.csv", "w", encoding="utf-8", newline="") as fh_out:
            writer = csv.writer(fh_out, lineterminator="\n")
            writer.writerow(
                ["quantity", "value", "err_bound", "method", "n_samples", "seed", "config_hash"]
            )
            h = cfg.config_hash()
            writer.writerow(["mean_flux_per_s", repr(flux.value), repr(flux.err_bound),
                             flux.method, flux.n_samples or "", flux.seed or "", h])
            writer.writerow(["link_budget_counts", repr(budget), repr(flux.err_bound * gain),
                             flux.method, flux.n_samples or "", flux.seed or "", h])
            writer.writerow(["p_hearing", repr(ph.value),
                             repr(0.5 * (ph.ci_high - ph.ci_low)), "monte_carlo",
                             ph.n_samples, ph.seed, h])
            writer.writerow(["p_false_hearing_literal", repr(fh.literal), repr(0.0),
                             "closed_form", "", "", h])
            writer.writerow(["p_damage", repr(pd_.value),
                             repr(0.5 * (pd_.ci_high - pd_.ci_low)), "monte_carlo",
                             pd_.n_samples, pd_.seed, h])
        print(f"wrote {out / 'eval.csv'}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = LinkConfig.from_file(args.config)
    spec = SweepSpec.from_file(args.sweep)
    result = run_sweep(cfg, spec)
    out = Path(args.out)
    csv_path = out / "sweep.csv"
    write_csv(result, csv_path)
    print(f"wrote {csv_path} ({len(result.rows)} rows)")

    failures = sum(1 for row in result.rows if row[-1])
    if failures:
        print(f"note: {failures} grid points recorded errors (see the error column)")

    if args.svg:
        from aoci import svgplot

        svg_path = out / "sweep.svg"
        provenance = f"config {cfg.config_hash()} seed {spec.mc_seed}"
        if spec.axis2 is None:
            xs, ys = [], []
            for row in result.rows:
                record = dict(zip(result.columns, row))
                if not record["error"] and record["value"] != "":
                    xs.append(float(record["axis1_value"]))
                    ys.append(float(record["value"]))
            svgplot.line_plot(
                svg_path, [(spec.metric, xs, ys)], spec.axis1.path, spec.metric,
                title=f"{spec.metric} vs {spec.axis1.path}",
                provenance=provenance,
            )
        else:
            from aoci.figures import _heatmap_from_result

            _heatmap_from_result(
                result, svg_path, spec.axis1.path, spec.axis2.path,
                f"{spec.metric}", log_values=spec.metric in ("mean_flux", "link_budget"),
                provenance=provenance,
            )
        print(f"wrote {svg_path}")
    return EXIT_OK


def _cmd_figure(args) -> int:
    cfg = LinkConfig.from_file(args.config) if args.config else None
    checks = run_figure(args.number, args.out, cfg=cfg, mc_n=args.samples, seed=args.seed)
    print(f"wrote fig{args.number}.csv and fig{args.number}.svg in {args.out}")
    all_ok = True
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        all_ok &= check.passed
        print(f"  {status} - {check.name} ({check.detail})")
    return EXIT_OK if all_ok else EXIT_VALIDATION


def _cmd_validate(args) -> int:
    results = run_validation(quick=args.quick)
    all_ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        all_ok &= r.passed
        print(f"{status} - {r.name}: {r.detail}")
    print("validation " + ("passed" if all_ok else "FAILED"))
    return EXIT_OK if all_ok else EXIT_VALIDATION


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "figure":
            return _cmd_figure(args)
        if args.command == "validate":
            return _cmd_validate(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())

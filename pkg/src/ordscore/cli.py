"""Command-line front end.

Reads a CSV plus a JSON run config, fits the requested encoding variant(s),
and writes four files into the output directory:

* ``summary.txt``   human-readable coefficient tables
* ``scores.json``   per-factor level labels, fitted scores, and parameters
* ``plot_data.csv`` level index / label / score rows for external plotting
* ``report.json``   full-precision coefficients, criteria, diagnostics

Exit codes: 0 success, 1 config or data error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .config import RunConfig, build_plan, load_config, load_dataset
from .errors import ConfigError, DataError, OrdscoreError
from .fitting import Family, FitResult
from .optimizer import (
    GHMapping,
    IntegerMapping,
    OptimizedFit,
    SplineMapping,
    compare_encodings,
    optimize_scores,
    variant_model,
)

MODES = ("compare", "quantile", "spline", "baseline")


def _mapping_label(mapping) -> str:
    if isinstance(mapping, GHMapping):
        return "gh"
    if isinstance(mapping, SplineMapping):
        return "spline"
    if isinstance(mapping, IntegerMapping):
        return "integer"
    return "poly"


def format_fit_table(title: str, fit: FitResult) -> str:
    """R-style coefficient table with the criterion line underneath."""
    gaussian = fit.family is Family.GAUSSIAN_IDENTITY
    stat = "t value" if gaussian else "z value"
    prob = "Pr(>|t|)" if gaussian else "Pr(>|z|)"
    header = ["", "Estimate", "Std. Error", stat, prob]
    body = [
        [
            name,
            f"{est:.3f}",
            f"{se:.2f}",
            f"{t:.2f}",
            f"{p:.2f}",
        ]
        for name, est, se, t, p in zip(
            fit.names, fit.coefficients, fit.std_errors, fit.t_values, fit.p_values
        )
    ]
    widths = [max(len(row[j]) for row in [header] + body) for j in range(5)]
    lines = [f"[{title}]"]
    lines.append("  ".join(h.rjust(w) for h, w in zip(header, widths)))
    for row in body:
        lines.append("  ".join(v.rjust(w) for v, w in zip(row, widths)))
    if gaussian:
        lines.append(
            f"Residual standard deviation: {fit.residual_sd:.2f} "
            f"on {fit.df_residual} degrees of freedom"
        )
    else:
        lines.append(
            f"Residual deviance: {fit.criterion:.2f} "
            f"on {fit.df_residual} degrees of freedom"
        )
    return "\n".join(lines) + "\n"


def _scores_entry(result: OptimizedFit, model) -> dict:
    entry: dict = {}
    for term in model.terms:
        name = term.factor.name
        if name not in result.scores:
            continue
        theta = result.theta.get(name)
        item = {
            "levels": list(term.factor.levels),
            "scores": [float(v) for v in result.scores[name]],
            "mapping": _mapping_label(term.mapping),
            "theta": None if theta is None else [float(v) for v in theta],
        }
        if isinstance(term.mapping, SplineMapping):
            item["spline_m"] = term.mapping.m
            item["spline_method"] = term.mapping.method
        entry[name] = item
    return entry


def _report_entry(result: OptimizedFit) -> dict:
    fit = result.fit
    entry = {
        "criterion": fit.criterion,
        "df_residual": fit.df_residual,
        "residual_sd": fit.residual_sd,
        "family": fit.family.value,
        "coefficients": [
            {
                "name": name,
                "estimate": float(est),
                "std_error": float(se),
                "t_value": float(t),
                "p_value": float(p),
            }
            for name, est, se, t, p in zip(
                fit.names, fit.coefficients, fit.std_errors,
                fit.t_values, fit.p_values,
            )
        ],
        "optimizer": None,
    }
    if result.diagnostics is not None:
        d = result.diagnostics
        entry["optimizer"] = {
            "n_parameters": d.n_parameters,
            "evaluations": d.evaluations,
            "start_criterion": d.start_criterion,
            "best_criterion": d.best_criterion,
        }
    return entry


def run(config: RunConfig, mode: str, output_dir: Path, seed: int) -> None:
    """Execute one run and write the four output files."""
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}; expected one of {MODES}")
    data = load_dataset(config)
    print(f"loaded {data.n_rows} rows from {config.data_path}")
    plan = build_plan(config, data)

    results: dict[str, OptimizedFit] = {}
    if mode == "compare":
        results = compare_encodings(plan)
    else:
        # optimize_scores degrades to a plain fit when nothing is free
        results[mode] = optimize_scores(variant_model(plan, mode))

    output_dir.mkdir(parents=True, exist_ok=True)

    summary = "\n".join(
        format_fit_table(variant, results[variant].fit) for variant in results
    )
    (output_dir / "summary.txt").write_text(summary, encoding="utf-8")

    scores_doc = {
        "schema": 1,
        "mode": mode,
        "variants": {
            variant: _scores_entry(results[variant], variant_model(plan, variant))
            for variant in results
        },
    }
    (output_dir / "scores.json").write_text(
        json.dumps(scores_doc, indent=2) + "\n", encoding="utf-8"
    )

    with open(output_dir / "plot_data.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["variant", "factor", "level", "label", "score"])
        for variant, result in results.items():
            model = variant_model(plan, variant)
            for term in model.terms:
                name = term.factor.name
                if name not in result.scores:
                    continue
                for k, (label, score) in enumerate(
                    zip(term.factor.levels, result.scores[name]), start=1
                ):
                    writer.writerow([variant, name, k, label, repr(float(score))])

    report = {
        "schema": 1,
        "mode": mode,
        "seed": seed,
        "data": str(config.data_path),
        "n_rows": data.n_rows,
        "response": config.response,
        "response_transform": config.response_transform,
        "variants": {variant: _report_entry(results[variant]) for variant in results},
    }
    (output_dir / "report.json").write_text(
        json.dumps(report, indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote summary.txt, scores.json, plot_data.csv, report.json to {output_dir}")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="ordscore",
        description="Fit regression models with optimized ordered-factor scores.",
    )
    parser.add_argument("--config", required=True, help="path to the JSON run config")
    parser.add_argument(
        "--mode",
        default="compare",
        choices=MODES,
        help="which encoding variant(s) to fit (default: compare)",
    )
    parser.add_argument("--output", default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="seed recorded in the report")
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config)
        output_dir = Path(args.output) if args.output else config.output_dir
        if output_dir is None:
            raise ConfigError("no output directory: set --output or config 'output_dir'")
        seed = args.seed if args.seed is not None else config.seed
        run(config, args.mode, output_dir, seed)
    except (ConfigError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OrdscoreError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Exit codes: 0 success, 1 validation failure (bad flags, bad input files,
unknown profile), 2 numerical failure or a failed property check.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .biplot import biplot_coordinates, feature_geometry
from .conformance import DEFAULT_TOLERANCE, render_grid, run_conformance
from .errors import NumericalError, ValidationError
from .fileio import RunConfig, fmt, prepare, read_csv, summary_dict, write_results
from .pca import DEFAULT_PROFILES, get_profile, pca
from .properties import property_suite
from .svd import svd
from .svg import render_svg

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--input", required=True, help="CSV file with a header row")
    sub.add_argument("--profile", default="svd-reference", help="convention profile name")
    sub.add_argument("--alpha", type=float, default=0.0, help="biplot split exponent in [0,1]")
    sub.add_argument("--components", type=int, default=2, help="number of biplot components")
    sub.add_argument("--no-center", action="store_true", help="input is already column-centered")
    sub.add_argument("--scale", action="store_true", help="scale columns to unit variance")
    sub.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    sub.add_argument("--svg", default=None, help="write a biplot SVG to this path")
    sub.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE, help="conformance tolerance")
    sub.add_argument("--out", default=None, help="directory for result files")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pcabiplot", description="PCA and biplots with explicit arithmetic conventions")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (
        ("pca", "scores, loadings and summary under a profile"),
        ("biplot", "biplot coordinates and optional SVG"),
        ("check", "run the property suite on a dataset"),
        ("conformance", "run the conformance grid over all profiles"),
    ):
        _common(subs.add_parser(name, help=text))
    subs.add_parser("profiles", help="list the profile registry")
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        input_path=args.input,
        profile_name=args.profile,
        alpha=args.alpha,
        components=args.components,
        center=not args.no_center,
        scale_unit_variance=args.scale,
        output_format=args.format,
        svg_path=args.svg,
        tolerance=args.tolerance,
        out_dir=args.out,
    )


def _load(config: RunConfig):
    try:
        X = read_csv(config.input_path)
    except OSError as exc:
        raise ValidationError(f"cannot read {config.input_path}: {exc.strerror or exc}") from None
    return prepare(X, config)


def _print_vectors(result, out) -> None:
    print(f"profile: {result.profile.name}", file=out)
    print("component," + ",".join(result.component_labels), file=out)
    for name, vec in (
        ("eigenvalue", result.reported_eigenvalues),
        ("sdev", result.sdev),
        ("explained", result.explained_variance_ratio),
    ):
        print(name + "," + ",".join(fmt(v) for v in vec), file=out)


def _cmd_pca(config: RunConfig, out) -> int:
    Y = _load(config)
    profile = get_profile(config.profile_name)
    result = pca(Y, profile)
    if config.output_format == "json":
        print(json.dumps(summary_dict(result, include_matrices=True), indent=2, ensure_ascii=False), file=out)
    else:
        _print_vectors(result, out)
    if config.out_dir is not None:
        for p in write_results(result, None, config):
            print(f"wrote {p}", file=sys.stderr)
    return EXIT_OK


def _cmd_biplot(config: RunConfig, out) -> int:
    Y = _load(config)
    if config.svg_path is not None and config.components != 2:
        raise ValidationError("SVG rendering requires exactly 2 components")
    s = svd(Y)
    coords = biplot_coordinates(s, config.alpha, config.components)
    result = pca(Y, get_profile(config.profile_name))
    if config.output_format == "json":
        print(json.dumps(summary_dict(result, coords)["biplot"], indent=2, ensure_ascii=False), file=out)
    else:
        cols = ",".join(f"PC{k + 1}" for k in range(coords.retained_components))
        print(f"layer,label,{cols}", file=out)
        for layer, labels, mat in (
            ("observation", coords.row_labels, coords.observations),
            ("feature", coords.col_labels, coords.features),
        ):
            for lab, row in zip(labels, mat):
                print(f"{layer},{lab}," + ",".join(fmt(v) for v in row), file=out)
    if config.out_dir is not None:
        for p in write_results(result, coords, config):
            print(f"wrote {p}", file=sys.stderr)
    if config.svg_path is not None:
        geometry = feature_geometry(coords, Y) if coords.alpha == 0.0 else None
        try:
            render_svg(coords, geometry, config.svg_path)
        except OSError as exc:
            raise ValidationError(f"cannot write {config.svg_path}: {exc.strerror or exc}") from None
        print(f"wrote {config.svg_path}", file=sys.stderr)
    return EXIT_OK


def _cmd_check(config: RunConfig, out) -> int:
    Y = _load(config)
    results = property_suite(Y)
    if config.output_format == "json":
        rows = [
            {"property": r.name, "passed": r.passed, "gap": r.gap, "tolerance": r.tolerance, "note": r.note}
            for r in results
        ]
        print(json.dumps(rows, indent=2), file=out)
    else:
        for r in results:
            print(r.line(), file=out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERICAL


def _cmd_conformance(config: RunConfig, out) -> int:
    Y = _load(config)
    report = run_conformance(Y, DEFAULT_PROFILES, config.tolerance)
    text = report.to_json() if config.output_format == "json" else render_grid(report)
    out.write(text)
    if config.out_dir is not None:
        os.makedirs(config.out_dir, exist_ok=True)
        name = "conformance.json" if config.output_format == "json" else "conformance.txt"
        path = os.path.join(config.out_dir, name)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def _cmd_profiles(out) -> int:
    for name in sorted(DEFAULT_PROFILES):
        p = DEFAULT_PROFILES[name]
        d = p.as_dict()
        fields = " ".join(f"{k}={v}" for k, v in d.items() if k != "name")
        print(f"{name}: {p.description}", file=out)
        print(f"    {fields}", file=out)
    return EXIT_OK


COMMANDS = {"pca": _cmd_pca, "biplot": _cmd_biplot, "check": _cmd_check, "conformance": _cmd_conformance}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        if args.command == "profiles":
            return _cmd_profiles(out)
        return COMMANDS[args.command](_config(args), out)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

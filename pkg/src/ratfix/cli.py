"""Config-driven command line.

One subcommand per analysis: ``certify`` (contraction constants),
``solve`` (orbit iteration with envelope column), ``property-p``
(fixed sets of map powers) and ``witness`` (Cauchy-violation pattern on
the orbit).  Exit statuses let scripts branch: 0 success, 2 config
error, 3 infeasible certificate, 4 non-convergence, 5 property-P
failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .config import (ConfigError, RunConfig, build_control, build_space_and_map,
                     parse_config)
from .contraction import all_ordered_pairs, certify, sample_box_pairs
from .fixedset import check_property_p
from .picard import find_cauchy_witness, iterate
from .report import (base_report, certificate_payload, dump_json, human_lines,
                     property_p_payload, trace_payload, witness_payload)
from .spaces import FiniteMetricSpace

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_NO_CONVERGENCE = 4
EXIT_PROPERTY_P = 5

SUBCOMMANDS = ("certify", "solve", "property-p", "witness")


def _require_block(block, name):
    if block is None:
        raise ConfigError(name, "block required for this subcommand")
    return block


def run(cfg: RunConfig, subcommand: str):
    """Execute one subcommand; returns (report dict, exit status).

    Deterministic given the config: all randomness is seeded from
    ``condition.seed``.
    """
    if subcommand not in SUBCOMMANDS:
        raise ConfigError("subcommand", f"unknown subcommand {subcommand!r}")
    space, mapping = build_space_and_map(cfg)
    control = build_control(cfg)
    cond = cfg.condition
    rep = base_report(cfg, subcommand, __version__)

    if subcommand == "certify":
        if isinstance(space, FiniteMetricSpace):
            pairs, scope, seed = all_ordered_pairs(space), "exhaustive", None
        else:
            pairs = sample_box_pairs(space, cond.grid_points,
                                     cond.random_points, cond.seed)
            scope, seed = "sampled", cond.seed
        cert = certify(space, mapping, control, cond.kind, pairs,
                       cond.margin, scope=scope, seed=seed)
        rep["certificate"] = certificate_payload(space, cert)
        return rep, (EXIT_OK if cert.feasible else EXIT_INFEASIBLE)

    if subcommand == "solve":
        it = _require_block(cfg.iteration, "iteration")
        constants = (cond.a, cond.b, control) if cond.a is not None else None
        trace = iterate(space, mapping, _start_point(space, it.start),
                        fix_tol=it.tol, max_iters=it.max_iters,
                        constants=constants)
        rep["trace"] = trace_payload(space, trace)
        return rep, (EXIT_OK if trace.converged else EXIT_NO_CONVERGENCE)

    if subcommand == "property-p":
        pp = check_property_p(space, mapping, cfg.property_p.n_max,
                              seed=cond.seed)
        rep["property_p"] = property_p_payload(space, pp)
        return rep, (EXIT_OK if pp.holds else EXIT_PROPERTY_P)

    wit = _require_block(cfg.witness, "witness")
    it = _require_block(cfg.iteration, "iteration")
    trace = iterate(space, mapping, _start_point(space, it.start),
                    fix_tol=it.tol, max_iters=it.max_iters)
    note = None
    found = None
    if len(trace.points) <= wit.horizon:
        note = (f"orbit has {len(trace.points)} points, not longer than the "
                f"horizon {wit.horizon}; no witness search possible")
    else:
        found = find_cauchy_witness(space, trace.points, wit.eps0, wit.horizon)
    rep["witness"] = witness_payload(space, found, wit.eps0, wit.horizon,
                                     len(trace.points), note)
    return rep, EXIT_OK


def _start_point(space, start):
    if isinstance(space, FiniteMetricSpace):
        return start
    return list(start)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratfix",
        description="Certify contraction conditions, iterate to fixed points, "
                    "check property P and hunt Cauchy violations.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_text in (
            ("certify", "search for feasible contraction constants"),
            ("solve", "iterate to a fixed point with error envelopes"),
            ("property-p", "compare fixed sets of map powers"),
            ("witness", "search the orbit for a Cauchy-violation pattern")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="YAML config path")
        p.add_argument("--out", help="write the machine report to this path")
        p.add_argument("--seed", type=int,
                       help="override the config's condition seed")
        p.add_argument("--quiet", action="store_true",
                       help="suppress the human rendering")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"config error: cannot read {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = parse_config(text)
        if args.seed is not None:
            cfg = replace(cfg, condition=replace(cfg.condition, seed=args.seed))
        report, status = run(cfg, args.subcommand)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if not args.quiet:
        for line in human_lines(report):
            print(line)
    machine = dump_json(report) + "\n"
    if args.out:
        Path(args.out).write_text(machine, encoding="utf-8")
    else:
        sys.stdout.write(machine)
    return status


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line entry point.

Exit status: 0 on success, 1 on runtime failure, 2 on usage or validation errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import yaml

from . import bmatrix, demo, harness, hebbian, vthreshold
from .core import DimensionError, RandomSource, random_memories, read_patterns, format_patterns
from .quaternary import QuaternaryLevels

log = logging.getLogger("varthresh")


class UsageError(ValueError):
    pass


def parse_range(text: str, kind=int) -> list:
    """``"7"``, ``"1,2,5"`` or inclusive ``"start:stop:step"``."""
    text = str(text).strip()
    try:
        if ":" in text:
            parts = [kind(p) for p in text.split(":")]
            if len(parts) == 2:
                parts.append(kind(1))
            if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
                raise UsageError(f"bad range {text!r}; expected start:stop:step with step > 0")
            start, stop, step = parts
            count = int(round((stop - start) / step)) + 1
            return [kind(start + i * step) for i in range(count) if start + i * step <= stop + 1e-9]
        return [kind(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"cannot parse {text!r} as a list of numbers") from None


def parse_fragment(text: str) -> list[int]:
    toks = text.replace(",", " ").split()
    if not toks or any(t not in ("1", "-1", "+1") for t in toks):
        raise UsageError(f"fragment must be a list of 1/-1 values, got {text!r}")
    return [int(t) for t in toks]


def parse_levels(text: str) -> tuple[float, float]:
    try:
        a, b = (float(v) for v in str(text).split(","))
    except ValueError:
        raise UsageError(f"--levels expects 'a,b' (outer,inner), got {text!r}") from None
    return a, b


def _load_memories(arg):
    path = Path(str(arg))
    if not path.exists():
        raise UsageError(f"memory file not found: {arg}")
    return read_patterns(path)


def _write(text: str, output):
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _learn(args, T, mem) -> vthreshold.ThresholdLearnResult:
    spec = harness.SweepSpec(
        "storage", [mem.n], learner=args.learner, grid_step=args.step, eta=args.eta, max_epochs=args.max_epochs
    )
    return harness.learn(spec, T, mem)


# -- subcommands --------------------------------------------------------------


def cmd_demo(args) -> int:
    return 0 if demo.run(step=args.step) else 1


def cmd_tmatrix(args) -> int:
    mem = _load_memories(args.memories)
    _write(hebbian.format_matrix(hebbian.build_t_matrix(mem)), args.output)
    return 0


def cmd_store(args) -> int:
    mem = _load_memories(args.memories)
    T = hebbian.build_t_matrix(mem)
    lines = [f"fixed: {hebbian.count_stored_fixed(T, mem)} of {mem.m}"]
    if args.thresholds:
        theta = vthreshold.read_thresholds(args.thresholds)
        if theta.size != mem.n:
            raise DimensionError(f"thresholds file has {theta.size} values but patterns have length {mem.n}")
        lines.append(f"variable: {int(vthreshold.stored_flags_variable(T, mem, theta).sum())} of {mem.m}")
    _write("\n".join(lines) + "\n", args.output)
    return 0


def cmd_thresholds(args) -> int:
    mem = _load_memories(args.memories)
    T = hebbian.build_t_matrix(mem)
    res = _learn(args, T, mem)
    _write(vthreshold.format_thresholds(res.thresholds), args.output)
    stored = ", ".join(str(i + 1) for i in res.stored_indices) or "none"
    print(f"stored {res.stored_count} of {mem.m} (memories {stored})", file=sys.stderr)
    return 0


def cmd_retrieve(args) -> int:
    if args.report == bool(args.fragment):
        raise UsageError("give exactly one of --fragment or --report")
    mem = _load_memories(args.memories)
    T = hebbian.build_t_matrix(mem)
    theta = None
    if args.thresholds:
        theta = vthreshold.read_thresholds(args.thresholds)
        if theta.size != mem.n:
            raise DimensionError(f"thresholds file has {theta.size} values but patterns have length {mem.n}")
    if args.order:
        order = parse_range(args.order)
        T = bmatrix.permute_network(T, order)
        mem = bmatrix.permute_patterns(mem.patterns, order)
        if theta is not None:
            theta = bmatrix.permute_thresholds(theta, order)
    B = bmatrix.build_b_matrix(T)

    if args.report:
        if theta is None:
            theta = _learn(args, T, mem).thresholds
        cap = harness.max_fragment(mem.n, args.max_fragment_fraction)
        out = harness.retrieval_outcome(T, mem, theta, cap)
        lines = ["memory,stored,min_fragment_fixed,min_fragment_variable"]
        for i, (s, kf, kv) in enumerate(zip(out.stored, out.min_fragment_fixed, out.min_fragment_variable), 1):
            lines.append(f"{i},{int(s)},{'' if kf is None else kf},{'' if kv is None else kv}")
        _write("\n".join(lines) + "\n", args.output)
        return 0

    frag = parse_fragment(args.fragment)
    if len(frag) > mem.n:
        raise DimensionError(f"fragment has {len(frag)} bits but the network has {mem.n} neurons")
    _write(format_patterns([bmatrix.retrieve_from_fragment(B, frag, theta)]), args.output)
    return 0


def cmd_random(args) -> int:
    n = parse_range(args.neurons)
    if len(n) != 1:
        raise UsageError("random needs a single --neurons value")
    mem = random_memories(n[0], int(args.memories), RandomSource(args.seed))
    _write(format_patterns(mem), args.output)
    return 0


def build_spec(args) -> harness.SweepSpec:
    neurons = parse_range(args.neurons) if args.neurons is not None else None
    common = dict(trials=args.trials, seed=args.seed, workers=args.workers)
    if args.mode == "quaternary":
        neurons = neurons or [9]
        if len(neurons) != 1:
            raise UsageError("quaternary sweep takes a single --neurons value")
        outer, inner = parse_levels(args.levels) if args.levels else (2.0, 1.0)
        t_values = parse_range(args.t_over_c, float) if args.t_over_c else [96, 144, 192, 240, 288, 336]
        patterns = parse_range(args.memories) if args.memories is not None else [1, 2, 3, 4, 5, 6]
        return harness.SweepSpec(
            "quaternary", neurons, pattern_counts=patterns, t_over_c=t_values,
            levels=QuaternaryLevels(outer, inner, t_values[0]), max_sweeps=args.max_sweeps, **common,
        )
    if args.levels or args.t_over_c:
        raise UsageError("--levels/--t-over-c only apply to the quaternary sweep")
    if neurons is None:
        raise UsageError("--neurons is required")
    m = parse_range(args.memories if args.memories is not None else "10")
    if len(m) != 1:
        raise UsageError("--memories must be a single count for this sweep")
    return harness.SweepSpec(
        args.mode, neurons, memory_count=m[0], learner=args.learner, grid_step=args.step,
        eta=args.eta, max_epochs=args.max_epochs, max_fragment_fraction=args.max_fragment_fraction, **common,
    )


def cmd_sweep(args) -> int:
    spec = build_spec(args)
    rows = harness.run_sweep(spec)
    harness.emit(rows, args.format, args.output)
    return 0


# -- parser -------------------------------------------------------------------


def _learner_flags(p):
    p.add_argument("--learner", choices=sorted(vthreshold.LEARNERS), default="grid")
    p.add_argument("--step", type=float, default=0.1, help="threshold grid step (default 0.1)")
    p.add_argument("--eta", type=float, default=0.05, help="Widrow-Hoff learning rate")
    p.add_argument("--max-epochs", type=int, default=500)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varthresh", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="YAML or JSON file whose keys mirror the long flags")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("demo", help="run the 7-neuron worked example with golden checks")
    p.add_argument("--step", type=float, default=0.1)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("tmatrix", help="print the Hebbian T-matrix of a pattern file")
    p.add_argument("--memories", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_tmatrix)

    p = sub.add_parser("store", help="count memories stored with fixed (and optionally given) thresholds")
    p.add_argument("--memories", required=True)
    p.add_argument("--thresholds")
    p.add_argument("--output")
    p.set_defaults(func=cmd_store)

    p = sub.add_parser("thresholds", help="learn per-neuron thresholds")
    p.add_argument("--memories", required=True)
    _learner_flags(p)
    p.add_argument("--output")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("retrieve", help="regenerate a memory from a fragment through the B-matrix")
    p.add_argument("--memories", required=True)
    p.add_argument("--fragment")
    p.add_argument("--thresholds")
    p.add_argument("--order", help="1-based activity-spread order, e.g. '2 5 3 1 4 6' or '2,5,3,1,4,6'")
    p.add_argument("--report", action="store_true", help="per-memory minimal fragment lengths as CSV")
    p.add_argument("--max-fragment-fraction", type=float, default=0.5)
    _learner_flags(p)
    p.add_argument("--output")
    p.set_defaults(func=cmd_retrieve)

    p = sub.add_parser("random", help="write random bipolar memories")
    p.add_argument("--neurons", required=True)
    p.add_argument("--memories", required=True, type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("sweep", help="run a seeded experiment sweep")
    p.add_argument("mode", choices=harness.MODES)
    p.add_argument("--neurons", help="N or start:stop:step")
    p.add_argument("--memories", help="memory count (pattern counts for quaternary)")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    _learner_flags(p)
    p.add_argument("--max-fragment-fraction", type=float, default=0.5)
    p.add_argument("--t-over-c")
    p.add_argument("--levels", help="outer,inner quaternary levels (default 2,1)")
    p.add_argument("--max-sweeps", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("csv", "table"), default="csv")
    p.add_argument("--output")
    p.set_defaults(func=cmd_sweep)
    return parser


def _apply_config(parser, argv):
    """Re-parse with config-file values as defaults so explicit flags win."""
    pre, _ = parser.parse_known_args(argv)
    if not pre.config:
        return parser.parse_args(argv)
    path = Path(pre.config)
    if not path.exists():
        raise UsageError(f"config file not found: {path}")
    text = path.read_text(encoding="utf-8")
    # BaseLoader keeps every scalar a string (YAML 1.1 would read 10:30:10 as base 60);
    # argparse then applies each flag's own type conversion to string defaults
    data = json.loads(text) if path.suffix == ".json" else yaml.load(text, Loader=yaml.BaseLoader)
    if not isinstance(data, dict):
        raise UsageError(f"{path}: config must be a mapping of flag names to values")
    data = {k.replace("-", "_"): v for k, v in data.items()}
    sub = parser._subparsers._group_actions[0].choices[pre.command]
    actions = {a.dest: a for a in sub._actions}
    unknown = sorted(set(data) - set(actions))
    if unknown:
        raise UsageError(f"{path}: unknown keys for '{pre.command}': {', '.join(unknown)}")
    defaults = {}
    for key, value in data.items():
        if isinstance(actions[key], argparse._StoreTrueAction):
            defaults[key] = str(value).lower() in ("1", "true", "yes", "on")
        else:
            defaults[key] = str(value)
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.debug("runtime failure", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

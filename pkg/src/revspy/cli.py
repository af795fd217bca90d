"""Command-line front end: classify | sigma | verify | match | sweep.

Exit codes: 0 success, 1 counterexample / revolutionary win in verify mode /
formula-exact disagreement in a sweep, 2 usage error, 3 state budget
exhausted.  Config file keys (line-oriented key=value) are overridden by
CLI flags; REVSPY_MAX_STATES overrides the default budget.

Reports are deterministic for a fixed config and seed: the millis column is
zero unless --timings is passed, so byte-identical reruns stay the default.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .cycle_strategy import ShortCycleSpyStrategy, UnicyclicSpyStrategy
from .engine import GameConfig, Team, play_match
from .families import all_trees_up_to, cycle_graph, unicyclic_graphs
from .graphs import Graph, GraphClass, classify, find_cycle, parse_graph
from .rev_strategy import FloodRevStrategy, LongCycleRevStrategy, RandomRevStrategy, RandomSpyStrategy, UnicyclicRevStrategy
from .solver import (
    DEFAULT_MAX_STATES,
    PolicyRevStrategy,
    PolicySpyStrategy,
    StateSpaceTooLarge,
    sigma_exact,
    sigma_formula,
    solve_safety,
    verify_strategy,
)
from .tree_strategy import TreeSpyStrategy

USAGE_ERROR = 2
BUDGET_ERROR = 3


def _load_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line without '=': {line!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _resolve_max_states(args) -> int:
    if getattr(args, "max_states", None) is not None:
        return args.max_states
    env = os.environ.get("REVSPY_MAX_STATES")
    if env:
        return int(env)
    if getattr(args, "_config", None) and "max_states" in args._config:
        return int(args._config["max_states"])
    return DEFAULT_MAX_STATES


def _read_graph(args) -> tuple[Graph, str]:
    if args.graph:
        return parse_graph(Path(args.graph).read_text()), args.graph
    print("error: --graph is required", file=sys.stderr)
    raise SystemExit(USAGE_ERROR)


SPY_STRATEGIES = {
    "tree": TreeSpyStrategy,
    "cycle": UnicyclicSpyStrategy,
    "unicyclic": UnicyclicSpyStrategy,
    "short-cycle": ShortCycleSpyStrategy,
}


def _spy_factory(name: str, g: Graph, cfg: GameConfig, max_states: int, seed: int):
    if name == "auto":
        name = "tree" if classify(g) in (GraphClass.TREE, GraphClass.FOREST) else "unicyclic"
    if name == "random":
        return lambda: RandomSpyStrategy(seed)
    if name == "policy":
        ws = solve_safety(g, cfg, max_states).winset
        return lambda: PolicySpyStrategy(ws)
    if name in SPY_STRATEGIES:
        return SPY_STRATEGIES[name]
    print(f"error: unknown spy strategy {name!r}", file=sys.stderr)
    raise SystemExit(USAGE_ERROR)


def _rev_factory(name: str, g: Graph, cfg: GameConfig, max_states: int, seed: int):
    table = {
        "flood": FloodRevStrategy,
        "long-cycle": LongCycleRevStrategy,
        "unicyclic": UnicyclicRevStrategy,
    }
    if name == "random":
        return lambda: RandomRevStrategy(seed)
    if name == "policy":
        ws = solve_safety(g, cfg, max_states).winset
        return lambda: PolicyRevStrategy(ws)
    if name in table:
        return table[name]
    print(f"error: unknown revolutionary strategy {name!r}", file=sys.stderr)
    raise SystemExit(USAGE_ERROR)


# ----- subcommands -----------------------------------------------------------


def cmd_classify(args) -> int:
    g, _ = _read_graph(args)
    cls = classify(g)
    line = f"class={cls.value} n={g.n} edges={g.num_edges}"
    if cls in (GraphClass.CYCLE, GraphClass.UNICYCLIC, GraphClass.UNICYCLIC_FOREST):
        cyc = find_cycle(g)
        line += f" l={len(cyc)} t={g.n - len(cyc)}"
    print(line)
    return 0


def cmd_sigma(args) -> int:
    g, label = _read_graph(args)
    max_states = _resolve_max_states(args)
    want_exact = args.exact or not args.formula
    results = {}
    try:
        if want_exact:
            results["exact"] = sigma_exact(g, args.m, args.r, max_states, graph_label=label)
        if args.formula or args.compare:
            results["formula"] = sigma_formula(g, args.m, args.r, graph_label=label)
    except StateSpaceTooLarge as e:
        print(f"error: {e}", file=sys.stderr)
        return BUDGET_ERROR
    if args.compare or (args.exact and args.formula):
        ex, fo = results["exact"].sigma, results["formula"].sigma
        if ex == fo:
            print(f"agree: {ex}")
            return 0
        print(f"DISAGREE: exact={ex} formula={fo}")
        return 1
    res = results.get("exact") or results.get("formula")
    print(f"sigma={res.sigma}")
    if args.verbose and res.verdicts:
        for s, verdict in sorted(res.verdicts.items()):
            print(f"  s={s}: {verdict}")
    return 0


def cmd_verify(args) -> int:
    g, label = _read_graph(args)
    cfg = GameConfig(m=args.m, r=args.r, s=args.s)
    max_states = _resolve_max_states(args)
    factory = _spy_factory(args.strategy, g, cfg, max_states, args.seed)
    try:
        res = verify_strategy(g, cfg, factory, max_states, graph_label=label)
    except StateSpaceTooLarge as e:
        print(f"error: {e}", file=sys.stderr)
        return BUDGET_ERROR
    if res.ok:
        print(f"ok: no counterexample in {res.states_explored} reachable states")
        return 0
    print(f"counterexample after exploring {res.states_explored} states")
    text = res.counterexample.to_text()
    if args.transcript:
        Path(args.transcript).write_text(text)
        print(f"transcript written to {args.transcript}")
    else:
        print(text, end="")
    return 1


def cmd_match(args) -> int:
    g, label = _read_graph(args)
    cfg = GameConfig(m=args.m, r=args.r, s=args.s)
    max_states = _resolve_max_states(args)
    rev = _rev_factory(args.rev_strategy, g, cfg, max_states, args.seed)()
    spy = _spy_factory(args.spy_strategy, g, cfg, max_states, args.seed)()
    outcome, transcript = play_match(
        g, cfg, rev, spy, max_rounds=args.max_rounds, graph_label=label, seed=args.seed
    )
    print(f"outcome={outcome}")
    if args.transcript:
        Path(args.transcript).write_text(transcript.to_text())
        print(f"transcript written to {args.transcript}")
    return 0


def _sweep_instances(args):
    if args.family == "trees":
        from .families import nonisomorphic_trees

        for n in range(1, args.max_n + 1):
            for i, g in enumerate(nonisomorphic_trees(n)):
                yield f"T{n}.{i}", g
    elif args.family == "cycles":
        for length in range(args.l_min, args.l_max + 1):
            yield f"C{length}", cycle_graph(length)
    elif args.family == "unicyclic":
        for length in range(args.l_min, args.l_max + 1):
            for t in range(args.t_min, args.t_max + 1):
                for i, g in enumerate(unicyclic_graphs(length, t)):
                    yield f"U{length}.{t}.{i}", g
    else:
        print(f"error: unknown family {args.family!r}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def cmd_sweep(args) -> int:
    max_states = _resolve_max_states(args)
    rows = []
    disagreements = 0
    r_values = [int(x) for x in args.r_list.split(",")]
    for label, g in _sweep_instances(args):
        cls = classify(g)
        if cls in (GraphClass.CYCLE, GraphClass.UNICYCLIC, GraphClass.UNICYCLIC_FOREST):
            cyc_len = len(find_cycle(g))
            t = g.n - cyc_len
        else:
            cyc_len, t = 0, 0
        for r in r_values:
            if r > args.m * g.n:
                continue  # outside the standing assumption r/m <= |V|
            if args.odd_r_only and r % args.m == 0:
                continue
            try:
                exact = sigma_exact(g, args.m, r, max_states, graph_label=label)
                formula = sigma_formula(g, args.m, r, graph_label=label)
            except StateSpaceTooLarge as e:
                rows.append(
                    f"{label},{cls.value},{cyc_len},{t},{args.m},{r},-,budget,exhausted,{e.estimate},0"
                )
                continue
            verdict = "agree" if exact.sigma == formula.sigma else "DISAGREE"
            if verdict == "DISAGREE":
                disagreements += 1
            millis = int(exact.millis) if args.timings else 0
            rows.append(
                f"{label},{cls.value},{cyc_len},{t},{args.m},{r},{exact.sigma},exact+formula,{verdict},{exact.states},{millis}"
            )
    report = "#schema graph,class,l,t,m,r,s,method,verdict,states,millis\n" + "\n".join(rows) + "\n"
    if args.out:
        Path(args.out).write_text(report)
        print(f"report written to {args.out} ({len(rows)} rows)")
    else:
        print(report, end="")
    if disagreements:
        print(f"{disagreements} DISAGREEMENTS", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="revspy", description=__doc__)
    parser.add_argument("--config", help="key=value config file; flags override")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a graph file")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sigma", help="spy threshold for a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--formula", action="store_true")
    p.add_argument("--compare", action="store_true")
    p.add_argument("--max-states", type=int)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("verify", help="adversarial closure against a spy strategy")
    p.add_argument("--graph", required=True)
    p.add_argument("--strategy", default="auto")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-s", type=int, required=True)
    p.add_argument("--max-states", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--transcript")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("match", help="play one match between two strategies")
    p.add_argument("--graph", required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-s", type=int, required=True)
    p.add_argument("--rev-strategy", default="random")
    p.add_argument("--spy-strategy", default="auto")
    p.add_argument("--max-rounds", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-states", type=int)
    p.add_argument("--transcript")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("sweep", help="formula-vs-exact sweep over a family")
    p.add_argument("--family", required=True, choices=["trees", "cycles", "unicyclic"])
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--l-min", type=int, default=3)
    p.add_argument("--l-max", type=int, default=5)
    p.add_argument("--t-min", type=int, default=0)
    p.add_argument("--t-max", type=int, default=2)
    p.add_argument("-m", type=int, default=2)
    p.add_argument("--r-list", default="3,5,7")
    p.add_argument("--odd-r-only", action="store_true")
    p.add_argument("--max-states", type=int)
    p.add_argument("--timings", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE_ERROR if e.code not in (0, None) else 0
    args._config = _load_config_file(args.config) if args.config else {}
    try:
        return args.func(args)
    except StateSpaceTooLarge as e:
        print(f"error: {e}", file=sys.stderr)
        return BUDGET_ERROR
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())

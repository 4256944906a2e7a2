"""Command-line interface.

Every command reads its parameters from flags and/or a JSON config file
(``--config``; flags win) and writes its primary output to ``--out`` or
stdout. Timing goes to stderr only, so reruns with the same config and seed
are byte-identical.

Exit codes: 0 success, 2 bad input, 3 infeasible parameters (or a degenerate
correlation in ``qbench``), 4 exact-oracle size limit exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import re
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import bench, dynamics, exact, generators, io, seeding
from . import rng as _rng
from .errors import GraphFormatError, InfeasibleError, SizeLimitError
from .graph import Graph
from .state import ColorState

EXIT_OK, EXIT_BAD_INPUT, EXIT_INFEASIBLE, EXIT_SIZE = 0, 2, 3, 4

COMMANDS = ("simulate", "select", "compare", "convbench", "qbench", "exact", "gen")
GEN_KINDS = ("ba", "star", "bipartite", "pathback", "mtight", "maxcov")


@dataclass
class ExperimentConfig:
    command: str
    graph: str | None = None
    undirected: bool = False
    state: str | None = None
    b0: int | None = None
    k: list[int] | None = None
    epsilon: float = 0.1
    reps: int = seeding.PRACTICAL_REPS
    guarantee: bool = False
    trials: int = bench.DEFAULT_TRIALS
    q: list[float] | None = None
    beta: float | None = None
    seed: int | None = None
    workers: int = 1
    max_rounds: int | None = None
    out: str | None = None
    format: str = "csv"
    profile: str | None = None
    algorithm: list[str] | None = None
    seeds: list[int] | None = None
    final_state: str | None = None
    kind: str | None = None
    n: int | None = None
    m: int | None = None
    subsets: str | None = None
    h: int | None = None

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("config must be a JSON object")
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "command" not in data:
            raise ValueError("config lacks 'command'")
        return cls(**data)

    def require_seed(self, what: str) -> int:
        if self.seed is None:
            raise ValueError(f"{what} is stochastic: pass --seed")
        return self.seed


# --- argument parsing ---------------------------------------------------------------

def _int_list(s: str) -> list[int]:
    return [int(x) for x in s.split(",") if x.strip()]


def _float_list(s: str) -> list[float]:
    return [float(x) for x in s.split(",") if x.strip()]


def _str_list(s: str) -> list[str]:
    return [x.strip() for x in s.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    a = common.add_argument
    a("--config", help="JSON experiment config; explicit flags override it")
    a("--save-config", help="write the effective config to this path")
    a("--graph", help="edge-list file or generator spec (ba:N:M, star:N, bipartite:N, pathback:N, mtight:N)")
    a("--undirected", action="store_true", help="mirror every edge of the input graph")
    a("--state", help="state file with 'red:' and 'blue:' lines")
    a("--b0", type=int, help="draw this many uniformly random blue nodes")
    a("--k", type=_int_list, help="budget, or comma-separated budgets for compare")
    a("--epsilon", type=float)
    a("--reps", type=int, help="Monte Carlo replications per greedy estimate")
    a("--guarantee", dest="guarantee", action="store_true",
      help="use R = 27 n k^2 ln(n^3) / eps^2 replications")
    a("--trials", type=int)
    a("--q", type=_float_list, help="comma-separated q values")
    a("--beta", type=float)
    a("--seed", type=int)
    a("--workers", type=int, help="accepted for compatibility; results never depend on it")
    a("--max-rounds", dest="max_rounds", type=int)
    a("--out")
    a("--format", choices=("csv", "json"))
    a("--profile", help="pick-profile file for deterministic replay")
    a("--algorithm", type=_str_list, help="selector(s): " + ", ".join(seeding.ALGORITHMS))
    a("--seeds", type=_int_list, help="seed set for exact F")
    a("--final-state", dest="final_state", help="also write the final state here")
    a("--n", type=int)
    a("--m", type=int)
    a("--subsets", help="maxcov subsets, e.g. '0,1;1,2'")
    a("--h", type=int, help="maxcov element count")

    p = argparse.ArgumentParser(prog="randompick", description="Random Pick competitive diffusion toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "gen":
            sp.add_argument("kind", choices=GEN_KINDS)
    return p


def config_from_args(argv) -> tuple[ExperimentConfig, str | None]:
    args = vars(build_parser().parse_args(argv))
    save = args.pop("save_config", None)
    path = args.pop("config", None)
    if path is not None:
        cfg = ExperimentConfig.from_json(Path(path).read_text())
        if cfg.command != args["command"]:
            raise ValueError(f"config is for '{cfg.command}', not '{args['command']}'")
        cfg = dataclasses.replace(cfg, **args)
    else:
        cfg = ExperimentConfig(**args)
    return cfg, save


# --- inputs ---------------------------------------------------------------------------

_SPEC = re.compile(r"^(ba|star|bipartite|pathback|mtight):(\d+)(?::(\d+))?$")


def load_graph(cfg: ExperimentConfig) -> tuple[Graph, ColorState | None]:
    """Graph plus the state a construction comes with (None for files and BA)."""
    if cfg.graph is None:
        raise ValueError("--graph is required")
    m = _SPEC.match(cfg.graph)
    if m and not Path(cfg.graph).exists():
        kind, n = m.group(1), int(m.group(2))
        if kind == "ba":
            if m.group(3) is None:
                raise ValueError("BA spec is ba:N:M")
            return generators.generate_ba(n, int(m.group(3)), cfg.require_seed("ba generation")), None
        seed = cfg.require_seed("star generation") if kind == "star" else 0
        return generators.generate_construction(_KIND[kind], n, seed)
    g, _ = io.load_edge_list(cfg.graph, cfg.undirected)
    return g, None


_KIND = {
    "star": generators.ConstructionKind.STAR,
    "bipartite": generators.ConstructionKind.BIPARTITE_TIGHTNESS,
    "pathback": generators.ConstructionKind.PATH_BACKEDGES,
    "mtight": generators.ConstructionKind.M_TIGHTNESS,
}


def load_state(cfg: ExperimentConfig, graph: Graph, builtin: ColorState | None) -> ColorState:
    if cfg.state is not None and cfg.b0 is not None:
        raise ValueError("--state and --b0 are exclusive")
    if cfg.state is not None:
        return io.parse_state(Path(cfg.state).read_text(), graph.n)
    if cfg.b0 is not None:
        if not 0 <= cfg.b0 <= graph.n:
            raise InfeasibleError(f"b0={cfg.b0} outside 0..{graph.n}")
        blue = _rng.generator(cfg.require_seed("--b0"), 9).choice(graph.n, size=cfg.b0, replace=False)
        return ColorState.from_sets(graph.n, blue=sorted(blue.tolist()))
    return builtin if builtin is not None else ColorState.uncolored(graph.n)


def _single_k(cfg) -> int:
    if not cfg.k:
        raise ValueError("--k is required")
    if len(cfg.k) != 1:
        raise ValueError("this command takes a single --k")
    return cfg.k[0]


def _clean(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def _emit(cfg, header, rows, obj) -> str:
    if cfg.format == "json":
        return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"
    return io.format_csv(header, rows)


# --- commands ---------------------------------------------------------------------------

def cmd_simulate(cfg: ExperimentConfig) -> tuple[str, int]:
    graph, builtin = load_graph(cfg)
    state = load_state(cfg, graph, builtin)
    if cfg.profile is not None:
        prof = io.parse_profile(Path(cfg.profile).read_text(), graph)
        result = dynamics.replay(graph, state, prof, cfg.max_rounds)
    else:
        result = dynamics.run(graph, state, cfg.require_seed("simulate"), cfg.max_rounds)
    if cfg.final_state:
        Path(cfg.final_state).write_text(io.format_state(result.final_state))
    rows = io.trajectory_rows(result)
    obj = {
        "rounds": result.rounds,
        "converged": result.converged,
        "trajectory": [list(r) for r in rows],
        "final_state": {"red": result.final_state.red().tolist(), "blue": result.final_state.blue().tolist()},
    }
    return _emit(cfg, io.TRAJECTORY_HEADER, rows, obj), EXIT_OK


def cmd_select(cfg: ExperimentConfig) -> tuple[str, int]:
    graph, builtin = load_graph(cfg)
    state = load_state(cfg, graph, builtin)
    k = _single_k(cfg)
    algo = (cfg.algorithm or ["greedy"])
    if len(algo) != 1:
        raise ValueError("select takes a single --algorithm")
    algo = algo[0]
    estimates: list = []
    extra = {}
    if algo == "greedy":
        gc = seeding.GreedyConfig(k=k, seed=cfg.require_seed("greedy"), epsilon=cfg.epsilon, reps=cfg.reps,
                                  guarantee=cfg.guarantee, max_rounds=cfg.max_rounds)
        sel = seeding.greedy_select(graph, state, gc)
        seeds, estimates = sel.seeds, sel.estimates
        extra = {"simulations": sel.simulations, "capped": sel.capped, "reps": gc.replications(graph.n)}
        print(f"greedy: {sel.wall_time:.2f}s", file=sys.stderr)
    elif algo == "community":
        seeds = seeding.community_select(graph, state, k, cfg.require_seed("community"))
    elif algo in seeding.MEASURES:
        seeds = seeding.baseline_select(graph, state, k, algo)
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    rows = [(i + 1, v, estimates[i] if estimates else "") for i, v in enumerate(seeds)]
    obj = {"algorithm": algo, "seeds": list(seeds), "estimates": estimates, **extra}
    return _emit(cfg, ("step", "node", "estimate"), rows, obj), EXIT_OK


def cmd_compare(cfg: ExperimentConfig) -> tuple[str, int]:
    graph, _ = load_graph(cfg)
    if cfg.b0 is None:
        raise ValueError("--b0 is required")
    if not cfg.k:
        raise ValueError("--k is required")
    algos = cfg.algorithm or ["greedy", *seeding.available_measures(graph), "community"]
    res = seeding.compare_experiment(graph, cfg.b0, cfg.k, algos, cfg.trials, cfg.require_seed("compare"),
                                     reps=cfg.reps, max_rounds=cfg.max_rounds)
    rows = [r.values() for r in res.rows]
    obj = {"rows": [dict(zip(seeding.CompareRow.HEADER, r)) for r in rows]}
    return _emit(cfg, seeding.CompareRow.HEADER, rows, obj), EXIT_OK


def cmd_convbench(cfg: ExperimentConfig) -> tuple[str, int]:
    graph, _ = load_graph(cfg)
    stats = bench.per_node_convergence(graph, cfg.trials, cfg.require_seed("convbench"), cfg.max_rounds)
    report = bench.bound_report(graph, stats.observed(), cfg.beta)
    print(f"min {stats.min:.4f}  mean {stats.mean:.4f}  max {stats.max:.4f}  unconverged {stats.unconverged}",
          file=sys.stderr)
    for name, bound, viol, total in report.rows():
        print(f"{name} = {bound:.2f}: {viol}/{total} above", file=sys.stderr)
    obj = {
        "min": stats.min, "mean": stats.mean, "max": stats.max, "trials": stats.trials,
        "unconverged": stats.unconverged, "node_means": stats.node_means.tolist(),
        "bounds": [{"bound": n, "value": b, "violations": v, "observations": t} for n, b, v, t in report.rows()],
        "flagged": report.flagged,
    }
    return _emit(cfg, ("node", "mean_rounds"), stats.rows(), obj), EXIT_OK


def cmd_qbench(cfg: ExperimentConfig) -> tuple[str, int]:
    graph, _ = load_graph(cfg)
    if not cfg.q:
        raise ValueError("--q is required")
    res = bench.q_sweep(graph, cfg.q, cfg.trials, cfg.require_seed("qbench"), cfg.max_rounds)
    obj = {"rows": [dict(zip(bench.QBenchResult.HEADER, r)) for r in res.rows], "pearson_r": res.r}
    out = _emit(cfg, bench.QBenchResult.HEADER, res.rows, obj)
    if math.isnan(res.r):
        print("warning: correlation undefined (fewer than two q values or zero variance)", file=sys.stderr)
        return out, EXIT_INFEASIBLE
    print(f"pearson r = {res.r:.4f}", file=sys.stderr)
    return out, EXIT_OK


def cmd_exact(cfg: ExperimentConfig) -> tuple[str, int]:
    graph, builtin = load_graph(cfg)
    if graph.n > exact.MAX_NODES:
        raise SizeLimitError(f"exact oracles support n <= {exact.MAX_NODES}, got n={graph.n}")
    state = load_state(cfg, graph, builtin)
    rows = [
        ("F", exact.exact_F(graph, state, cfg.seeds or [])),
        ("expected_convergence_time", exact.exact_expected_convergence_time(graph, state.with_red(cfg.seeds or []))),
    ]
    obj = {"F": rows[0][1], "expected_convergence_time": rows[1][1], "seeds": cfg.seeds or []}
    if cfg.k:
        best, val = exact.exact_best_seed(graph, state, _single_k(cfg))
        rows += [("best_seed", " ".join(map(str, best))), ("best_value", val)]
        obj.update(best_seed=list(best), best_value=val)
    return _emit(cfg, ("quantity", "value"), rows, obj), EXIT_OK


def cmd_gen(cfg: ExperimentConfig) -> tuple[str, int]:
    kind = cfg.kind
    if kind == "maxcov":
        if cfg.subsets is None or cfg.h is None:
            raise ValueError("maxcov needs --subsets and --h")
        subsets = [set(_int_list(s)) for s in cfg.subsets.split(";")]
        graph, _ = generators.max_coverage_transform(subsets, cfg.h, (cfg.k or [1])[0], cfg.epsilon)
        state = ColorState.uncolored(graph.n)
    else:
        if cfg.n is None:
            raise ValueError("--n is required")
        if kind == "ba":
            if cfg.m is None:
                raise ValueError("--m is required for ba")
            graph, state = generators.generate_ba(cfg.n, cfg.m, cfg.require_seed("ba generation")), None
        else:
            seed = cfg.require_seed("star generation") if kind == "star" else 0
            graph, state = generators.generate_construction(_KIND[kind], cfg.n, seed)
    if cfg.final_state and state is not None:
        Path(cfg.final_state).write_text(io.format_state(state))
    return io.format_edge_list(graph), EXIT_OK


_HANDLERS = {
    "simulate": cmd_simulate, "select": cmd_select, "compare": cmd_compare, "convbench": cmd_convbench,
    "qbench": cmd_qbench, "exact": cmd_exact, "gen": cmd_gen,
}


def run_config(cfg: ExperimentConfig) -> tuple[str, int]:
    if cfg.format not in ("csv", "json"):
        raise ValueError("--format must be csv or json")
    if cfg.workers < 1:
        raise ValueError("--workers must be >= 1")
    return _HANDLERS[cfg.command](cfg)


def main(argv=None) -> int:
    t0 = time.perf_counter()
    try:
        cfg, save = config_from_args(argv)
        if save:
            Path(save).write_text(cfg.to_json())
        out, code = run_config(cfg)
    except SizeLimitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SIZE
    except InfeasibleError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (GraphFormatError, ValueError, TypeError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if cfg.out:
        Path(cfg.out).write_text(out)
    else:
        sys.stdout.write(out)
    print(f"wall time {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``gen``, ``solve``, ``oracle``, ``sweep``, ``distsim``.

Exit codes: 0 success, 1 invalid input, 2 infeasible instance, 3 oracle
budget exceeded.  Every command writes deterministic text, so rerunning it
with the same arguments yields byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import contextmanager
from dataclasses import asdict
from typing import IO, Iterator, Sequence

from .baselines import BaselineKind, run_baseline
from .distsim import distributed_pipeline, simulate_distributed_cover, simulate_on_base_graph
from .experiments import (
    ALGORITHMS,
    ExperimentConfig,
    dump_topology,
    generate_topology,
    load_topology,
    run_sweep,
    summarize,
    write_csv,
)
from .extended import build_extended_graph
from .model import (
    BudgetExceededError,
    EnergyModel,
    InfeasibleInstanceError,
    MulticastInstance,
    MulticastPlan,
    Network,
    energy_cost,
    is_feasible_schedule,
    validate_network,
)
from .oracle import OracleBudget, exact_memtcs, exact_msb, exact_mist_xi, harmonic
from .solver import TIE_BREAKS, SolverConfig, find_msb, solve_memtcs
from .steiner import STEINER_RATIO

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_BUDGET = 0, 1, 2, 3

log = logging.getLogger("dcmulticast")


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x)


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x)


@contextmanager
def _out(path: str | None) -> Iterator[IO[str]]:
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _read_instance(args) -> tuple[Network, MulticastInstance]:
    with open(args.topology, encoding="utf-8") as fh:
        net, inst = load_topology(fh.read())
    problems = validate_network(net)
    if problems:
        raise ValueError("invalid network: " + "; ".join(problems))
    if args.terminals is not None:
        terms = _ints(args.terminals)
        source = args.source if args.source is not None else terms[0]
        inst = MulticastInstance(terms, source)
    elif args.source is not None:
        if inst is None:
            raise ValueError("--source needs --terminals or an instance in the topology file")
        inst = MulticastInstance(inst.terminals | {args.source}, args.source)
    if inst is None:
        raise ValueError("no multicast instance: pass --terminals or embed one in the topology file")
    inst.check_against(net)
    return net, inst


def _solver_cfg(args) -> SolverConfig:
    return SolverConfig(args.steiner, args.tie_break, not args.literal)


def _plan_lines(plan: MulticastPlan, net: Network, model: EnergyModel) -> list[str]:
    lines = [f"root {plan.tree.root}"]
    lines += [f"edge {p} {c}" for c, p in sorted(plan.tree.parent.items())]
    for u in sorted(plan.schedule):
        lines.append(f"B {u} " + ",".join(map(str, sorted(plan.schedule[u]))))
    lines += [
        f"feasible {str(is_feasible_schedule(plan.tree, plan.schedule, net)).lower()}",
        f"tree_nodes {len(plan.tree.nodes)}",
        f"forwarders {plan.forwarders}",
        f"transmissions {plan.transmissions}",
        f"energy {energy_cost(plan, model)}",
    ]
    return lines


def cmd_gen(args) -> int:
    cfg = ExperimentConfig(
        seed=args.seed,
        n_nodes=args.nodes,
        area=(args.width, args.height),
        range=args.range,
        K=args.K,
        duty_slots=args.duty_slots,
        duty_fraction=args.duty_fraction,
        terminal_fraction=args.terminal_fraction,
        n_terminals=args.terminals,
        max_retries=args.max_retries,
    )
    net, inst = generate_topology(cfg, args.trial)
    with _out(args.output) as fh:
        fh.write(dump_topology(net, inst))
    return EXIT_OK


def cmd_solve(args) -> int:
    net, inst = _read_instance(args)
    model = EnergyModel(args.es, args.er)
    cfg = _solver_cfg(args)
    if args.algorithm == "TCS":
        plan = solve_memtcs(net, inst, model, cfg)
    else:
        plan = run_baseline(BaselineKind(args.algorithm), net, inst, model, cfg)
    lines = [f"algorithm {args.algorithm}"] + _plan_lines(plan, net, model)
    with _out(args.output) as fh:
        fh.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_oracle(args) -> int:
    net, inst = _read_instance(args)
    budget = OracleBudget(args.max_nodes, args.max_K, args.max_subsets)
    budget.check(net)
    model = EnergyModel(args.es, args.er)
    cfg = _solver_cfg(args)
    delta = net.max_degree()
    h = harmonic(delta + 1)
    lines = [f"nodes {len(net.nodes)}", f"K {net.K}", f"max_degree {delta}", f"H(max_degree+1) {h}"]
    if len(inst.terminals) > 1:
        g = build_extended_graph(net)
        approx_sb = find_msb(g, inst.terminals, cfg)
        opt_sb = exact_msb(g, inst.terminals, budget)
        xi, _ = exact_mist_xi(net, inst.terminals, budget)
        msb_bound = (3 * cfg.rho * h + cfg.rho) * len(opt_sb)
        lines += [
            f"msb_approx {len(approx_sb)}",
            f"msb_exact {len(opt_sb)}",
            f"msb_bound {float(msb_bound):.6f}",
            f"mist_xi {xi}",
            f"xi_equals_msb {str(xi == len(opt_sb)).lower()}",
        ]
    plan = solve_memtcs(net, inst, model, cfg)
    opt = exact_memtcs(net, inst, model, budget)
    pi, pi_opt = energy_cost(plan, model), energy_cost(opt, model)
    bound = (12 * cfg.rho * h + 4 * cfg.rho) * pi_opt
    ratio = 1.0 if pi_opt == 0 else pi / pi_opt
    lines += [
        f"energy_approx {pi}",
        f"energy_exact {pi_opt}",
        f"energy_ratio {ratio:.6f}",
        f"energy_bound {float(bound):.6f}",
        f"within_bound {str(pi <= bound).lower()}",
    ]
    with _out(args.output) as fh:
        fh.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = ExperimentConfig(
        seed=args.seed,
        n_nodes=args.nodes,
        area=(args.width, args.height),
        range=args.range,
        K=args.K,
        duty_slots=args.duty_slots,
        duty_fraction=args.duty_fraction,
        n_terminals=args.terminals,
        terminal_fractions=_floats(args.fractions),
        K_values=_ints(args.K_values) if args.K_values else (),
        trials=args.trials,
        algorithms=tuple(args.algorithms.split(",")),
        e_s=args.es,
        e_r=args.er,
        steiner_algorithm=args.steiner,
        refine=not args.literal,
        tie_break=args.tie_break,
        record_runtime=args.timing,
    )
    records = run_sweep(cfg)
    if not records:
        raise InfeasibleInstanceError("no trial produced a result")
    with _out(args.output) as fh:
        write_csv(records, fh)
    if args.summary:
        s = summarize(records)
        doc = {"rows": [asdict(r) for r in s.rows], "reductions": [asdict(r) for r in s.reductions]}
        with _out(args.summary) as fh:
            fh.write(json.dumps(doc, indent=1) + "\n")
    return EXIT_OK


def cmd_distsim(args) -> int:
    net, inst = _read_instance(args)
    if args.base:
        sim = simulate_on_base_graph(net, inst.terminals, args.delta)
    else:
        sim = simulate_distributed_cover(build_extended_graph(net), inst.terminals)
    lines = [
        f"rounds {sim.rounds}",
        f"messages {sim.messages}",
        *(f"messages_{k} {v}" for k, v in sim.by_kind.items()),
        f"time_slots {sim.time_slots}",
        "cover " + " ".join(f"{w.node}:{w.slot}" for w in sorted(sim.cover)),
    ]
    if args.plan:
        model = EnergyModel(args.es, args.er)
        plan, full = distributed_pipeline(net, inst, model, _solver_cfg(args))
        lines += [f"budget_{k} {v}" for k, v in sorted(full.budgets.items())]
        lines += _plan_lines(plan, net, model)
    with _out(args.output) as fh:
        fh.write("\n".join(lines) + "\n")
    if args.trace:
        with _out(args.trace) as fh:
            fh.write(sim.trace())
    return EXIT_OK


def _add_instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("topology", help="topology file written by 'gen'")
    p.add_argument("--terminals", help="comma-separated terminal ids (overrides the file)")
    p.add_argument("--source", type=int, help="source node (default: first terminal)")


def _add_solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--steiner", choices=sorted(STEINER_RATIO), default="kmb")
    p.add_argument("--tie-break", choices=TIE_BREAKS, default="terminal")
    p.add_argument("--literal", action="store_true",
                   help="schedule inner nodes with their full bridge slot sets, no pruning")


def _add_energy_args(p: argparse.ArgumentParser, e_s: int, e_r: int) -> None:
    p.add_argument("--es", type=int, default=e_s, help=f"energy per transmission (default {e_s})")
    p.add_argument("--er", type=int, default=e_r, help=f"energy per reception (default {e_r})")


def _add_deploy_args(p: argparse.ArgumentParser) -> None:
    d = ExperimentConfig()
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nodes", type=int, default=d.n_nodes)
    p.add_argument("--width", type=float, default=d.area[0])
    p.add_argument("--height", type=float, default=d.area[1])
    p.add_argument("--range", type=float, default=d.range)
    p.add_argument("--K", type=int, default=d.K)
    p.add_argument("--duty-slots", type=int, help="active slots per node (overrides --duty-fraction)")
    p.add_argument("--duty-fraction", type=float, default=d.duty_fraction)
    p.add_argument("--terminals", type=int, help="terminal count (overrides fractions)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dcmulticast", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random deployment and instance")
    _add_deploy_args(p)
    p.add_argument("--terminal-fraction", type=float, default=0.5)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--max-retries", type=int, default=200)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="plan one instance with one algorithm")
    _add_instance_args(p)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="TCS")
    _add_solver_args(p)
    _add_energy_args(p, 100, 15)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="compare the planner with exact optima on a small instance")
    _add_instance_args(p)
    _add_solver_args(p)
    _add_energy_args(p, 10, 2)
    b = OracleBudget()
    p.add_argument("--max-nodes", type=int, default=b.max_nodes)
    p.add_argument("--max-K", type=int, default=b.max_K)
    p.add_argument("--max-subsets", type=int, default=b.max_subsets)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("sweep", help="run the experiment sweep and write CSV")
    _add_deploy_args(p)
    d = ExperimentConfig()
    p.add_argument("--fractions", default=",".join(map(str, d.terminal_fractions)))
    p.add_argument("--K-values", default="", help="comma-separated K values to sweep")
    p.add_argument("--trials", type=int, default=d.trials)
    p.add_argument("--algorithms", default=",".join(ALGORITHMS))
    _add_solver_args(p)
    _add_energy_args(p, d.e_s, d.e_r)
    p.add_argument("--timing", action="store_true", help="record wall-clock runtime (breaks byte-determinism)")
    p.add_argument("-o", "--output")
    p.add_argument("--summary", help="also write a JSON summary to this path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("distsim", help="simulate the distributed satellite cover")
    _add_instance_args(p)
    p.add_argument("--base", action="store_true", help="run on the base graph with nuclear nodes as proxies")
    p.add_argument("--delta", type=int, help="slots per phase on the base graph (default K+1)")
    p.add_argument("--plan", action="store_true", help="also build the multicast plan from the cover")
    _add_solver_args(p)
    _add_energy_args(p, 100, 15)
    p.add_argument("--trace", help="write the message log to this path")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_distsim)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: oracle budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InfeasibleInstanceError as exc:
        print(f"error: infeasible instance: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

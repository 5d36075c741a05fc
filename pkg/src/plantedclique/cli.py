"""Batch experiment runner: every pipeline as a seeded, scriptable subcommand.

Exit codes: 0 success (verified where applicable), 2 parameter/input error,
3 unverified recovery, 4 algorithm error, 5 solver non-convergence.
"""

from __future__ import annotations

import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click

from . import certificate as cert_mod
from . import enumeration, hardness, io as gio, oracle, recovery
from .generate import (
    GenParams,
    GenerationError,
    ParameterError,
    PlantedInstance,
    generate_instance,
)
from .graph import Graph, VertexSet, complement
from .rng import fanout_seed
from .theta import STATUS_CONVERGED, SolverConfig, solution_to_dict, theta

REPORT_SCHEMA = "plantedclique.recovery/1"
BENCH_FIELDS = [
    "n", "p", "k", "strategy", "algo", "trial", "seed",
    "success", "clique_size", "theta_value", "wall_ms", "error",
]

STRATEGY_NAMES = {
    "random": "random",
    "common-neighborhood": "common_neighborhood",
    "low-degree": "low_degree",
    "is-random": "is_random",
    "is-low-degree": "is_low_degree",
}

_PATTERNS = {
    "k4": lambda: Graph.complete(4),
    "diamond": lambda: Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]),
}


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
def main() -> None:
    """Planted-clique instances: generate, recover, certify, enumerate, reduce."""


@main.command("gen")
@click.option("--n", type=int, required=True)
@click.option("--p", type=float, required=True)
@click.option("--k", type=int, required=True)
@click.option("--strategy", type=click.Choice(sorted(STRATEGY_NAMES)), default="random")
@click.option("--t-size", type=int, default=1, help="anchor size for common-neighborhood")
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def cmd_gen(n, p, k, strategy, t_size, seed, out):
    """Write an instance bundle (JSON header + edge list)."""
    try:
        params = GenParams(n, p, k, seed)
        inst = generate_instance(params, STRATEGY_NAMES[strategy], t_size=t_size)
    except (ParameterError, GenerationError) as exc:
        _fail(str(exc), 2)
    gio.save_bundle(inst, out)
    click.echo(f"wrote {out}")


def _load_input(path: str) -> tuple[Graph, PlantedInstance | None]:
    with open(path) as fh:
        first = fh.readline()
    if first.startswith("{"):
        inst = gio.load_bundle(path)
        return inst.planted_graph, inst
    return gio.load_graph(path), None


@main.command("recover")
@click.option("--algo", type=click.Choice(["theta", "guess", "high-degree", "enumerate"]),
              default="theta")
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--k", type=int, required=True)
@click.option("--t-param", type=int, default=3, help="clique-size cap for enumerate")
@click.option("--verify", type=click.Choice(["oracle", "ground-truth", "none"]),
              default="none")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_recover(algo, in_path, k, t_param, verify, out):
    """Run one recovery pipeline and emit its JSON report."""
    g, inst = _load_input(in_path)
    start = time.perf_counter()
    try:
        if algo == "enumerate":
            report = enumeration.recover_sparse(g, k, t_param)
            clique = report.max_clique
            payload = {
                "schema": REPORT_SCHEMA,
                "algo": algo,
                "clique": clique.to_sorted_list(),
                "clique_size": len(clique),
                "maximal_count": report.maximal_count,
                "truncated": report.truncated,
                "verified": len(clique) >= k,
                "wall_ms": (time.perf_counter() - start) * 1000.0,
            }
        else:
            fn = {
                "theta": recovery.recover_theta,
                "guess": recovery.recover_guessing,
                "high-degree": recovery.recover_high_degree,
            }[algo]
            rep = fn(g, k)
            payload = {
                "schema": REPORT_SCHEMA,
                "algo": algo,
                "clique": rep.clique.to_sorted_list(),
                "clique_size": len(rep.clique),
                "theta_value": rep.theta_value,
                "core": rep.core.to_sorted_list(),
                "candidates": rep.candidates.to_sorted_list(),
                "cover_size": rep.cover_size,
                "branch_nodes": rep.branch_nodes,
                "wall_ms": rep.wall_ms,
                "verified": rep.verified,
            }
    except (recovery.DepthExceeded, recovery.RecoveryFailed, ParameterError) as exc:
        _fail(str(exc), 4)
    if verify != "none" and inst is not None:
        try:
            truth = oracle.ground_truth_max_clique(inst)
            payload["ground_truth"] = truth.to_sorted_list()
            payload["matches_ground_truth"] = payload["clique"] == truth.to_sorted_list()
        except oracle.OracleUnavailable as exc:
            payload["ground_truth_error"] = str(exc)
    text = json.dumps(payload, sort_keys=True, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    click.echo(text)
    sys.exit(0 if payload["verified"] else 3)


@main.command("theta")
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--complement", "use_complement", is_flag=True, default=False)
@click.option("--eps", type=float, default=1e-5)
@click.option("--max-iters", type=int, default=50_000)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_theta(in_path, use_complement, eps, max_iters, out):
    """Theta value (and contributions) of a graph or bundle."""
    g, _ = _load_input(in_path)
    if use_complement:
        g = complement(g)
    try:
        sol = theta(g, SolverConfig(eps=eps, max_iters=max_iters))
    except ValueError as exc:
        _fail(str(exc), 2)
    payload = solution_to_dict(sol)
    text = json.dumps(payload, sort_keys=True, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    click.echo(f"theta = {sol.value:.6f} ({sol.status}, {sol.iterations} iterations)")
    if not out:
        click.echo(text)
    if sol.status != STATUS_CONVERGED:
        sys.exit(5)


@main.command("certify")
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_certify(in_path, out):
    """Spectral certificate and degree-fluctuation check for a bundle."""
    with open(in_path) as fh:
        first = fh.readline()
    if not first.startswith("{"):
        _fail("certify needs an instance bundle with ground truth", 2)
    inst = gio.load_bundle(in_path)
    if inst.adversary.kind != "clique" or len(inst.planted) == 0:
        _fail("certify needs a planted-clique bundle", 2)
    report = cert_mod.certify(inst)
    lhs, rhs, ok = cert_mod.empirical_varbound(inst)
    payload = cert_mod.certificate_to_dict(report)
    payload["varbound"] = {"lhs": lhs, "rhs": rhs, "ok": ok}
    text = json.dumps(payload, sort_keys=True, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    click.echo(text)


@main.group("hardness")
def cmd_hardness() -> None:
    """Reduction gadgets, pattern planting, copy counts, repetition loop."""


def _pattern_by_name(name: str) -> Graph:
    if name in _PATTERNS:
        return _PATTERNS[name]()
    return gio.load_graph(name)


@cmd_hardness.command("reduce")
@click.option("--h", "pattern_name", required=True, help="k4, diamond, or a graph file")
@click.option("--t", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_reduce(pattern_name, t, out):
    try:
        red = hardness.reduce_3regular(_pattern_by_name(pattern_name), t)
    except ParameterError as exc:
        _fail(str(exc), 2)
    payload = {
        "schema": "plantedclique.reduction/1",
        "vertices": red.gadget.n,
        "edges": red.gadget.edge_count(),
        "t": red.t,
        "avg_degree": f"{red.alpha_avg.numerator}/{red.alpha_avg.denominator}",
        "is_offset": red.is_offset,
        "balanced": hardness.is_balanced(red.gadget),
    }
    if out:
        with open(out, "w") as fh:
            gio.write_edge_list(red.gadget, fh)
        payload["gadget_file"] = out
    click.echo(json.dumps(payload, sort_keys=True, indent=2))


@cmd_hardness.command("plant-h")
@click.option("--h", "pattern_name", required=True)
@click.option("--n", type=int, required=True)
@click.option("--p", type=float, required=True)
@click.option("--k", type=int, default=0)
@click.option("--k-prime", type=int, default=0)
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def cmd_plant_h(pattern_name, n, p, k, k_prime, seed, out):
    pattern = _pattern_by_name(pattern_name)
    try:
        if k > 0:
            inst = hardness.plant_pattern_with_is(n, p, pattern, k, k_prime, seed)
        else:
            inst = hardness.plant_pattern(n, p, pattern, seed)
    except ParameterError as exc:
        _fail(str(exc), 2)
    header = {
        "schema": "plantedclique.pattern-bundle/1",
        "n": n, "p": p, "k": k, "k_prime": k_prime, "seed": seed,
        "part_size": inst.part_size,
        "pattern_edges": sorted(list(pattern.edges())),
        "copy": inst.copy_list(),
        "extra_independent": inst.extra_independent.to_sorted_list(),
        "failed_default": inst.failed_default,
    }
    with open(out, "w") as fh:
        fh.write(json.dumps(header, sort_keys=True, separators=(",", ":")) + "\n")
        gio.write_edge_list(inst.graph, fh)
    click.echo(f"wrote {out}")


@cmd_hardness.command("count-xh")
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False), required=True)
def cmd_count_xh(in_path):
    with open(in_path) as fh:
        header = json.loads(fh.readline())
        g = gio.read_edge_list(fh)
    pattern = Graph.from_edges(
        1 + max((max(u, v) for u, v in header["pattern_edges"]), default=0),
        header["pattern_edges"],
    )
    try:
        count = hardness.count_pattern_copies(g, pattern, header["part_size"])
    except ParameterError as exc:
        _fail(str(exc), 2)
    expected = hardness.expected_copy_count(
        g.n, pattern.n, header["p"], pattern.edge_count()
    )
    click.echo(json.dumps({
        "count": count,
        "expected": expected,
        "likelihood_ratio": count / expected,
    }, sort_keys=True, indent=2))


@cmd_hardness.command("algrand")
@click.option("--h", "pattern_name", required=True)
@click.option("--k-prime", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.option("--p", type=float, required=True)
@click.option("--k", type=int, required=True)
@click.option("--gamma", type=float, default=0.5)
@click.option("--recover-fn", type=click.Choice(["oracle", "theta"]), default="oracle")
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_algrand(pattern_name, k_prime, n, p, k, gamma, recover_fn, seed, out):
    pattern = _pattern_by_name(pattern_name)

    def oracle_fn(g: Graph, want: int) -> VertexSet | None:
        found = oracle.max_is_exact(g)
        if len(found) < want:
            return None
        trimmed = found.to_sorted_list()[:want]
        return VertexSet.from_iterable(g.n, trimmed)

    def theta_fn(g: Graph, want: int) -> VertexSet | None:
        rep = recovery.recover_theta(complement(g), want)
        if not rep.verified:
            return None
        trimmed = rep.clique.to_sorted_list()[:want]
        return VertexSet.from_iterable(g.n, trimmed)

    fn = oracle_fn if recover_fn == "oracle" else theta_fn
    transcript: list = []
    try:
        result = hardness.repetition_loop(
            pattern, k_prime, n, p, k, gamma, fn, seed, transcript=transcript
        )
    except ParameterError as exc:
        _fail(str(exc), 2)
    payload = {
        "schema": "plantedclique.algrand/1",
        "found": result.to_sorted_list() if result is not None else None,
        "iterations_used": len(transcript),
        "transcript": transcript,
    }
    text = json.dumps(payload, sort_keys=True, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    click.echo(text)


@cmd_hardness.command("plan")
@click.option("--delta", type=float, required=True)
@click.option("--eps", type=float, default=0.1)
@click.option("--alpha", type=float, default=2.25)
@click.option("--n", type=int, required=True)
@click.option("--k-const", type=float, default=6.0)
def cmd_plan(delta, eps, alpha, n, k_const):
    try:
        plan = hardness.plan_parameters(delta, eps, alpha, n, k_const=k_const)
    except ParameterError as exc:
        _fail(str(exc), 2)
    click.echo(json.dumps(plan, sort_keys=True, indent=2))
    click.echo(f"feasible at n={n}: {plan['feasible']}")


def _bench_trial(args: tuple) -> dict:
    n, p, k, strategy, algo, trial, seed, t_size, t_param = args
    row = {
        "n": n, "p": p, "k": k, "strategy": strategy, "algo": algo,
        "trial": trial, "seed": seed, "success": "",
        "clique_size": "", "theta_value": "", "wall_ms": "", "error": "",
    }
    start = time.perf_counter()
    try:
        inst = generate_instance(
            GenParams(n, p, k, seed), STRATEGY_NAMES[strategy], t_size=t_size
        )
        if algo == "enumerate":
            rep = enumeration.recover_sparse(inst.planted_graph, k, t_param)
            clique = rep.max_clique
            row["success"] = int(
                len(clique) >= k and inst.planted.issubset(clique)
            )
            row["clique_size"] = len(clique)
        else:
            fn = {
                "theta": recovery.recover_theta,
                "guess": recovery.recover_guessing,
                "high-degree": recovery.recover_high_degree,
            }[algo]
            rep = fn(inst.planted_graph, k)
            row["success"] = int(rep.verified)
            row["clique_size"] = len(rep.clique)
            if rep.theta_value is not None:
                row["theta_value"] = f"{rep.theta_value:.6f}"
    except Exception as exc:  # per-row failures never abort the sweep
        row["error"] = f"{type(exc).__name__}: {exc}"
    row["wall_ms"] = f"{(time.perf_counter() - start) * 1000.0:.1f}"
    return row


@main.command("bench")
@click.option("--n", "n_list", required=True, help="comma-separated sizes")
@click.option("--p", "p_list", required=True, help="comma-separated densities")
@click.option("--k", "k_list", required=True, help="comma-separated planted sizes")
@click.option("--strategy", "strategy_list", default="random")
@click.option("--algo", "algo_list", default="theta")
@click.option("--trials", type=int, default=1)
@click.option("--jobs", type=int, default=1)
@click.option("--master-seed", type=int, default=0)
@click.option("--t-size", type=int, default=1)
@click.option("--t-param", type=int, default=3)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def cmd_bench(n_list, p_list, k_list, strategy_list, algo_list, trials, jobs,
              master_seed, t_size, t_param, out):
    """Sweep a parameter grid; one CSV row per trial, never aborting the sweep."""
    grid = []
    index = 0
    for n in map(int, n_list.split(",")):
        for p in map(float, p_list.split(",")):
            for k in map(int, k_list.split(",")):
                for strategy in strategy_list.split(","):
                    if strategy not in STRATEGY_NAMES:
                        _fail(f"unknown strategy {strategy!r}", 2)
                    for algo in algo_list.split(","):
                        for trial in range(trials):
                            seed = fanout_seed(master_seed, index)
                            grid.append(
                                (n, p, k, strategy, algo, trial, seed, t_size, t_param)
                            )
                            index += 1
    jobs = int(os.environ.get("PLANTED_CLIQUE_THREADS", jobs))
    if jobs > 1 and grid:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_bench_trial, grid))
    else:
        rows = [_bench_trial(args) for args in grid]
    with open(out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=BENCH_FIELDS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    click.echo(f"wrote {len(rows)} rows to {out}")


if __name__ == "__main__":
    main()

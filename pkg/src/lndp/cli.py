"""Command-line harness for the locally private graph estimators.

Exit codes: 0 on success, 2 on a parameter/spec error, 3 on an internal
invariant violation.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from lndp import blur, distinguisher, estimators, graph_core, harness, linquery
from lndp.graph_core import Graph, GenerationError, GraphParameterError
from lndp.harness import ExperimentSpec, GraphSpec, SpecError
from lndp.mechanisms import CalibrationError, PrivacyParams

EXIT_SPEC_ERROR = 2
EXIT_INVARIANT = 3

_USER_ERRORS = (GraphParameterError, CalibrationError, SpecError, ValueError)


def _fail(message: str, code: int = EXIT_SPEC_ERROR) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _emit(ctx: click.Context, text: str) -> None:
    out = ctx.obj.get("out")
    if out is None:
        click.echo(text, nl=not text.endswith("\n"))
    else:
        Path(out).write_text(text)


def _csv_or_json(ctx: click.Context, header: str, rows: list[list]) -> str:
    if ctx.obj["format"] == "json":
        keys = header.split(",")
        return json.dumps([dict(zip(keys, row)) for row in rows], indent=2)
    lines = [header]
    for row in rows:
        lines.append(
            ",".join(
                str(v).lower() if isinstance(v, bool) else repr(v)
                if isinstance(v, float) else str(v)
                for v in row
            )
        )
    return "\n".join(lines) + "\n"


def _load_graph(path: str) -> Graph:
    try:
        return Graph.from_edgelist_text(Path(path).read_text())
    except OSError as exc:
        _fail(str(exc))


@click.group()
@click.option("--seed", type=int, default=0, show_default=True, help="Master seed.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write output here instead of stdout.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True, help="Tabular output format.")
@click.pass_context
def main(ctx: click.Context, seed: int, out: str | None, fmt: str) -> None:
    """Locally private graph statistics: generation, estimation, and
    verification."""
    ctx.obj = {"seed": seed, "out": out, "format": fmt}


@main.command()
@click.option("--family", type=click.Choice(harness._FAMILIES), required=True)
@click.option("--n", type=int, required=True)
@click.option("--p", type=float, default=None, help="Edge probability (er).")
@click.option("--d", type=int, default=None, help="Degree (regular).")
@click.option("--t", type=int, default=None, help="Star size (starpartite).")
@click.option("--k", type=int, default=None, help="Clique size (clique).")
@click.option("--bound", "D", type=int, default=None, help="Degree bound (bounded).")
@click.option("--density", type=float, default=None, help="Target density (bounded).")
@click.pass_context
def gen(ctx, family, n, p, d, t, k, D, density):
    """Sample a graph and print it as an edge list ("n m", then "i j")."""
    gspec = GraphSpec(family=family, n=n, p=p, d=d, t=t, k=k, D=D, density=density)
    try:
        G = gspec.build(ctx.obj["seed"])
    except _USER_ERRORS as exc:
        _fail(str(exc))
    except GenerationError as exc:
        _fail(str(exc), EXIT_INVARIANT)
    _emit(ctx, G.to_edgelist_text())


@main.command()
@click.option("--graph", "graph_path", type=click.Path(exists=False), required=True)
@click.option("--n", type=int, default=None,
              help="Expected node count (checked against the file).")
@click.option("--s", type=int, required=True, help="Blur bin width.")
@click.option("--eps", type=float, required=True)
@click.option("--delta", type=float, required=True)
@click.option("--workload", type=click.Choice(["pmf", "cdf"]), default="pmf",
              show_default=True)
@click.option("--debug-noiseless", is_flag=True, default=False)
@click.pass_context
def degdist(ctx, graph_path, n, s, eps, delta, workload, debug_noiseless):
    """Private blurry degree distribution (pmf or CDF) of a graph file."""
    G = _load_graph(graph_path)
    if n is not None and n != G.n:
        _fail(f"--n {n} does not match graph file (n={G.n})")
    try:
        params = PrivacyParams(eps=eps, delta=delta)
        truth_pmf = blur.compressed_blurry(graph_core.degree_pmf(G), s).probs
        if workload == "pmf":
            est = linquery.pmf_estimate(
                G, params, s, ctx.obj["seed"], debug_noiseless=debug_noiseless
            )
            truth = truth_pmf
        else:
            est = linquery.cdf_estimate(
                G, params, s, ctx.obj["seed"], debug_noiseless=debug_noiseless
            )
            truth = np.cumsum(truth_pmf)
    except _USER_ERRORS as exc:
        _fail(str(exc))
    rows = [
        [i, i * s, float(est[i]), float(truth[i])] for i in range(est.size)
    ]
    _emit(ctx, _csv_or_json(ctx, "index,degree_value,estimate,truth", rows))


def _estimator_command(ctx, spec_dict: dict) -> None:
    try:
        spec = harness.spec_from_dict(spec_dict)
        records = harness.run_experiment(spec)
    except _USER_ERRORS as exc:
        _fail(str(exc))
    except GenerationError as exc:
        _fail(str(exc), EXIT_INVARIANT)
    rows = [[r.trial, r.seed, r.truth, r.estimate, r.abs_error] for r in records]
    _emit(ctx, _csv_or_json(ctx, "trial,seed,truth,estimate,abs_error", rows))


def _gen_opts(fn):
    for deco in reversed([
        click.option("--graph", "graph_path", type=click.Path(), default=None,
                     help="Edge-list file (overrides generation flags)."),
        click.option("--eps", type=float, required=True),
        click.option("--delta", type=float, required=True),
        click.option("--trials", type=int, default=1, show_default=True),
        click.option("--debug-noiseless", is_flag=True, default=False),
    ]):
        fn = deco(fn)
    return fn


def _run_on_file(ctx, graph_path, task, eps, delta, trials, debug_noiseless, D=None):
    """Estimator loop over a fixed graph file (no generation)."""
    G = _load_graph(graph_path)
    params = PrivacyParams(eps=eps, delta=delta)
    rows = []
    try:
        for trial in range(trials):
            seed = harness.trial_seed(ctx.obj["seed"], trial)
            if task == "edges":
                bound = D if D is not None else max(1, int(G.degrees().max(initial=1)))
                truth = float(G.edge_count)
                est = estimators.est_edges(
                    G, bound, params, seed, debug_noiseless=debug_noiseless
                )
            elif task == "er":
                truth = 2.0 * G.edge_count / (G.n * (G.n - 1)) if G.n > 1 else 0.0
                est = estimators.est_er_p(
                    G, params, seed, debug_noiseless=debug_noiseless
                )
            else:
                truth = float(G.degrees().max(initial=0) + 1)
                est = estimators.est_clique(
                    G, params, seed, debug_noiseless=debug_noiseless
                )
            rows.append([trial, seed, truth, float(est), abs(float(est) - truth)])
    except _USER_ERRORS as exc:
        _fail(str(exc))
    _emit(ctx, _csv_or_json(ctx, "trial,seed,truth,estimate,abs_error", rows))


@main.command()
@_gen_opts
@click.option("--n", type=int, default=None)
@click.option("--family", type=click.Choice(harness._FAMILIES), default="er",
              show_default=True)
@click.option("--p", type=float, default=None)
@click.option("--d", type=int, default=None)
@click.option("--t", type=int, default=None)
@click.option("--k", type=int, default=None)
@click.option("--density", type=float, default=None)
@click.option("--bound", "D", type=int, required=True, help="Public degree bound.")
@click.pass_context
def edges(ctx, graph_path, eps, delta, trials, debug_noiseless,
          n, family, p, d, t, k, density, D):
    """Private edge count of a degree-bounded graph."""
    if graph_path is not None:
        _run_on_file(ctx, graph_path, "edges", eps, delta, trials,
                     debug_noiseless, D=D)
        return
    if n is None:
        _fail("either --graph or --n is required")
    g = {kk: v for kk, v in dict(
        family=family, n=n, p=p, d=d, t=t, k=k, density=density, D=D
    ).items() if v is not None}
    _estimator_command(ctx, {
        "task": "edges", "graph": g, "eps": eps, "delta": delta,
        "trials": trials, "master_seed": ctx.obj["seed"],
        "debug_noiseless": debug_noiseless,
    })


@main.command()
@_gen_opts
@click.option("--n", type=int, default=None)
@click.option("--p", type=float, default=None, help="Edge probability.")
@click.pass_context
def er(ctx, graph_path, eps, delta, trials, debug_noiseless, n, p):
    """Private edge-probability estimate on Erdos-Renyi graphs."""
    if graph_path is not None:
        _run_on_file(ctx, graph_path, "er", eps, delta, trials, debug_noiseless)
        return
    if n is None or p is None:
        _fail("either --graph or both --n and --p are required")
    _estimator_command(ctx, {
        "task": "er", "graph": {"family": "er", "n": n, "p": p},
        "eps": eps, "delta": delta, "trials": trials,
        "master_seed": ctx.obj["seed"], "debug_noiseless": debug_noiseless,
    })


@main.command()
@_gen_opts
@click.option("--n", type=int, default=None)
@click.option("--k", type=int, default=None, help="Planted clique size.")
@click.pass_context
def clique(ctx, graph_path, eps, delta, trials, debug_noiseless, n, k):
    """Private clique-size estimate on clique-plus-isolated graphs."""
    if graph_path is not None:
        _run_on_file(ctx, graph_path, "clique", eps, delta, trials, debug_noiseless)
        return
    if n is None or k is None:
        _fail("either --graph or both --n and --k are required")
    _estimator_command(ctx, {
        "task": "clique", "graph": {"family": "clique", "n": n, "k": k},
        "eps": eps, "delta": delta, "trials": trials,
        "master_seed": ctx.obj["seed"], "debug_noiseless": debug_noiseless,
    })


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.option("--eps", type=float, required=True)
@click.option("--delta", type=float, required=True)
@click.option("--trials", type=int, default=1, show_default=True)
@click.option("--family", type=click.Choice(["star", "regular"]), required=True)
@click.option("--debug-noise-scale", type=float, default=1.0, show_default=True,
              help="Multiply the report noise std (non-private when != 1).")
@click.pass_context
def distinguish(ctx, n, t, eps, delta, trials, family, debug_noise_scale):
    """Classify sampled graphs as starpartite or regular."""
    try:
        spec = harness.spec_from_dict({
            "task": "distinguish",
            "graph": {"family": "regular" if family == "regular" else "starpartite",
                      "n": n, "d" if family == "regular" else "t": t},
            "eps": eps, "delta": delta, "trials": trials,
            "master_seed": ctx.obj["seed"], "t": t, "family_label": family,
            "debug_noise_scale": debug_noise_scale,
        })
        records = harness.run_distinguish_trials(spec)
    except _USER_ERRORS as exc:
        _fail(str(exc))
    except GenerationError as exc:
        _fail(str(exc), EXIT_INVARIANT)
    rows = [
        [r.trial, r.family, r.label, r.correct, r.fraction_yj, r.tau]
        for r in records
    ]
    _emit(ctx, _csv_or_json(ctx, "trial,family,label,correct,fraction_Yj,tau", rows))


@main.command()
@click.pass_context
def verify(ctx):
    """Run the analytic invariant and inequality suite."""
    results = harness.run_verify_suite(ctx.obj["seed"])
    rows = [[name, ok] for name, ok in results]
    _emit(ctx, _csv_or_json(ctx, "check,passed", rows))
    if not all(ok for _, ok in results):
        sys.exit(EXIT_INVARIANT)


@main.command()
@click.argument("spec_file", type=click.Path(dir_okay=False))
@click.pass_context
def experiment(ctx, spec_file):
    """Run a declarative experiment spec (JSON or key=value sections)."""
    try:
        text = Path(spec_file).read_text()
    except OSError as exc:
        _fail(str(exc))
    try:
        spec = harness.parse_spec(text)
        records = harness.run_experiment(spec)
    except _USER_ERRORS as exc:
        _fail(str(exc))
    except GenerationError as exc:
        _fail(str(exc), EXIT_INVARIANT)
    if ctx.obj["format"] == "json":
        text_out = harness.records_to_json(records)
    else:
        text_out = harness.records_to_csv(records)
    out = ctx.obj["out"] or spec.output_path
    if out is None:
        click.echo(text_out, nl=False)
    else:
        Path(out).write_text(text_out)


if __name__ == "__main__":
    main()

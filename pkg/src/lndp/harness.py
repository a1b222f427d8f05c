"""Experiment orchestration: declarative specs, seeded trial sweeps,
and stable CSV/JSON emission.

All randomness flows from one master seed; per-trial seeds are derived
from (master seed, trial index), so records are bit-for-bit reproducible
and independent of any trial-level parallelism.
"""

from __future__ import annotations

import configparser
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field, fields
from typing import Any

import numpy as np

from lndp import analysis, blur, distinguisher, estimators, graph_core, linquery
from lndp.graph_core import Graph, GraphParameterError
from lndp.mechanisms import PrivacyParams, leaky_rr_pmf
from lndp.rng import child_rng

__all__ = [
    "ExperimentSpec",
    "TrialRecord",
    "SpecError",
    "parse_spec",
    "run_experiment",
    "records_to_csv",
    "records_to_json",
    "run_distinguish_trials",
    "run_verify_suite",
    "CSV_HEADER",
]

CSV_HEADER = "trial,seed,truth,estimate,abs_error,wall_time_ms,certified"

_TASKS = ("edges", "er", "clique", "pmf", "cdf", "distinguish", "verify")
_FAMILIES = ("er", "regular", "starpartite", "clique", "bounded", "empty")


class SpecError(ValueError):
    """A structurally invalid experiment spec; the message names the field."""


@dataclass(frozen=True)
class GraphSpec:
    family: str = "er"
    n: int = 0
    p: float | None = None
    d: int | None = None
    t: int | None = None
    k: int | None = None
    D: int | None = None
    density: float | None = None

    def build(self, seed: int) -> Graph:
        required = {"er": "p", "regular": "d", "starpartite": "t",
                    "clique": "k", "bounded": "D"}.get(self.family)
        if required is not None and getattr(self, required) is None:
            raise GraphParameterError(
                f"graph.{required} is required for family {self.family!r}"
            )
        if self.family == "er":
            return graph_core.generate_er(self.n, self.p, seed)
        if self.family == "regular":
            return graph_core.generate_regular(self.n, self.d, seed)
        if self.family == "starpartite":
            return graph_core.generate_starpartite(self.n, self.t, seed)
        if self.family == "clique":
            return graph_core.generate_clique_plus_isolated(self.n, self.k, seed)
        if self.family == "bounded":
            density = self.density if self.density is not None else 1.0
            return graph_core.generate_bounded(self.n, self.D, density, seed)
        return Graph.empty(self.n)


@dataclass(frozen=True)
class ExperimentSpec:
    task: str
    graph: GraphSpec
    eps: float = 1.0
    delta: float = 1e-6
    s: int | None = None
    trials: int = 1
    master_seed: int = 0
    output_path: str | None = None
    sweep_n: tuple[int, ...] | None = None
    debug_noiseless: bool = False
    debug_noise_scale: float = 1.0
    family_label: str | None = None  # distinguish only: star | regular
    t: int | None = None  # distinguish only

    @property
    def certified(self) -> bool:
        return not self.debug_noiseless and self.debug_noise_scale == 1.0

    def to_json(self) -> str:
        out = asdict(self)
        out["graph"] = {k: v for k, v in asdict(self.graph).items() if v is not None}
        out = {k: v for k, v in out.items() if v is not None}
        if self.sweep_n is not None:
            out["sweep_n"] = list(self.sweep_n)
        return json.dumps(out, indent=2, sort_keys=True)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    truth: float
    estimate: float
    abs_error: float
    wall_time_ms: float
    certified: bool
    sweep_key: str | None = None


def _coerce(value: str) -> Any:
    low = value.strip()
    if low.lower() in ("true", "false"):
        return low.lower() == "true"
    for cast in (int, float):
        try:
            return cast(low)
        except ValueError:
            continue
    if low.startswith("["):
        return json.loads(low)
    return low


def parse_spec(text: str) -> ExperimentSpec:
    """Parse a JSON object or a sectioned key=value config into a spec.

    Unknown keys are rejected with the offending field named.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON spec: {exc}") from exc
    else:
        parser = configparser.ConfigParser()
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise SpecError(f"invalid config: {exc}") from exc
        data = {}
        for section in parser.sections():
            block = {k: _coerce(v) for k, v in parser.items(section)}
            if section in ("experiment", "privacy"):
                data.update(block)
            else:
                data[section] = block
    return spec_from_dict(data)


def spec_from_dict(data: dict) -> ExperimentSpec:
    data = dict(data)
    graph_data = data.pop("graph", None)
    if not isinstance(graph_data, dict):
        raise SpecError("missing required section: graph")
    graph_fields = {f.name for f in fields(GraphSpec)}
    unknown = set(graph_data) - graph_fields
    if unknown:
        raise SpecError(f"unknown graph key(s): {', '.join(sorted(unknown))}")
    graph = GraphSpec(**graph_data)
    if graph.family not in _FAMILIES:
        raise SpecError(f"graph.family must be one of {_FAMILIES}, got {graph.family!r}")
    if graph.n < 1:
        raise SpecError("graph.n must be a positive integer")

    spec_fields = {f.name for f in fields(ExperimentSpec)} - {"graph"}
    unknown = set(data) - spec_fields
    if unknown:
        raise SpecError(f"unknown key(s): {', '.join(sorted(unknown))}")
    if "task" not in data:
        raise SpecError("missing required key: task")
    if data["task"] not in _TASKS:
        raise SpecError(f"task must be one of {_TASKS}, got {data['task']!r}")
    if "eps" not in data:
        raise SpecError("missing required key: eps")
    if "sweep_n" in data and data["sweep_n"] is not None:
        data["sweep_n"] = tuple(int(x) for x in data["sweep_n"])
    try:
        spec = ExperimentSpec(graph=graph, **data)
    except TypeError as exc:
        raise SpecError(str(exc)) from exc
    _check_task_params(spec)
    return spec


def _check_task_params(spec: ExperimentSpec) -> None:
    g = spec.graph
    need = {
        "er": ("p",) if g.family == "er" else (),
        "regular": ("d",),
        "starpartite": ("t",),
        "clique": ("k",),
        "bounded": ("D",),
        "empty": (),
    }[g.family]
    for name in need:
        if getattr(g, name) is None:
            raise SpecError(f"graph.{name} is required for family {g.family!r}")
    if spec.task == "edges" and g.D is None and g.family != "bounded":
        raise SpecError("graph.D (degree bound) is required for task 'edges'")
    if spec.task in ("pmf", "cdf") and spec.s is None:
        raise SpecError(f"s is required for task {spec.task!r}")
    if spec.task == "distinguish":
        if spec.t is None:
            raise SpecError("t is required for task 'distinguish'")
        if spec.family_label not in ("star", "regular"):
            raise SpecError("family_label must be 'star' or 'regular' for distinguish")
    if spec.trials < 0:
        raise SpecError("trials must be >= 0")


def trial_seed(master_seed: int, trial: int) -> int:
    return int(child_rng(master_seed, "trial", trial).integers(1 << 63))


def _scalar_trial(
    spec: ExperimentSpec, g: GraphSpec, seed: int
) -> tuple[float, float]:
    params = PrivacyParams(eps=spec.eps, delta=spec.delta)
    G = g.build(seed)
    task = spec.task
    if task == "edges":
        D = g.D if g.D is not None else max(1, int(G.degrees().max(initial=1)))
        truth = float(G.edge_count)
        est = estimators.est_edges(
            G, D, params, seed, debug_noiseless=spec.debug_noiseless
        )
    elif task == "er":
        truth = float(g.p)
        est = estimators.est_er_p(
            G, params, seed, debug_noiseless=spec.debug_noiseless
        )
    elif task == "clique":
        truth = float(g.k)
        est = estimators.est_clique(
            G, params, seed, debug_noiseless=spec.debug_noiseless
        )
    elif task in ("pmf", "cdf"):
        fn = linquery.pmf_estimate if task == "pmf" else linquery.cdf_estimate
        vec = fn(G, params, spec.s, seed, debug_noiseless=spec.debug_noiseless)
        # mass-conservation summary: total estimated mass vs exactly 1
        est = float(vec.sum()) if task == "pmf" else float(vec[-1])
        truth = 1.0
    else:
        raise SpecError(f"task {task!r} is not a scalar-trial task")
    return truth, float(est)


def run_experiment(spec: ExperimentSpec) -> list[TrialRecord]:
    """Execute spec.trials seeded trials (per sweep point, if sweeping)."""
    if spec.task == "distinguish":
        return [
            TrialRecord(
                trial=r.trial,
                seed=r.seed,
                truth=1.0,
                estimate=1.0 if r.correct else 0.0,
                abs_error=0.0 if r.correct else 1.0,
                wall_time_ms=r.wall_time_ms,
                certified=spec.certified,
            )
            for r in run_distinguish_trials(spec)
        ]
    if spec.task == "verify":
        records = []
        for i, (name, ok) in enumerate(run_verify_suite(spec.master_seed)):
            records.append(
                TrialRecord(
                    trial=i,
                    seed=spec.master_seed,
                    truth=1.0,
                    estimate=1.0 if ok else 0.0,
                    abs_error=0.0 if ok else 1.0,
                    wall_time_ms=0.0,
                    certified=True,
                    sweep_key=name,
                )
            )
        return records

    sweep = spec.sweep_n if spec.sweep_n is not None else (None,)
    records: list[TrialRecord] = []
    for n_value in sweep:
        g = spec.graph if n_value is None else GraphSpec(
            **{**asdict(spec.graph), "n": int(n_value)}
        )
        key = None if n_value is None else f"n={n_value}"
        for trial in range(spec.trials):
            seed = trial_seed(spec.master_seed, trial)
            t0 = time.perf_counter()
            truth, est = _scalar_trial(spec, g, seed)
            elapsed = (time.perf_counter() - t0) * 1000.0
            records.append(
                TrialRecord(
                    trial=trial,
                    seed=seed,
                    truth=truth,
                    estimate=est,
                    abs_error=abs(est - truth),
                    wall_time_ms=elapsed,
                    certified=spec.certified,
                    sweep_key=key,
                )
            )
    return records


@dataclass(frozen=True)
class DistinguishRecord:
    trial: int
    seed: int
    family: str
    label: str
    correct: bool
    fraction_yj: float
    tau: float
    wall_time_ms: float = 0.0


def run_distinguish_trials(spec: ExperimentSpec) -> list[DistinguishRecord]:
    n, t = spec.graph.n, spec.t
    params = distinguisher.DistinguisherParams(
        n=n, t=t, eps=spec.eps, delta=spec.delta, noise_scale=spec.debug_noise_scale
    )
    expected = (
        distinguisher.LABEL_REGULAR
        if spec.family_label == "regular"
        else distinguisher.LABEL_STAR
    )
    records = []
    for trial in range(spec.trials):
        seed = trial_seed(spec.master_seed, trial)
        t0 = time.perf_counter()
        if spec.family_label == "regular":
            G = graph_core.generate_regular(n, t, seed)
        else:
            G = graph_core.generate_starpartite(n, t, seed)
        label, fraction = distinguisher.distinguish(G, params, seed)
        elapsed = (time.perf_counter() - t0) * 1000.0
        records.append(
            DistinguishRecord(
                trial=trial,
                seed=seed,
                family=spec.family_label,
                label=label,
                correct=label == expected,
                fraction_yj=fraction,
                tau=params.tau,
                wall_time_ms=elapsed,
            )
        )
    return records


def records_to_csv(records: list[TrialRecord]) -> str:
    """The stable trial CSV; a sweep_key column appears only when a sweep
    was requested."""
    with_sweep = any(r.sweep_key is not None for r in records)
    header = CSV_HEADER + (",sweep_key" if with_sweep else "")
    out = io.StringIO()
    out.write(header + "\n")
    for r in records:
        row = (
            f"{r.trial},{r.seed},{r.truth!r},{r.estimate!r},{r.abs_error!r},"
            f"{r.wall_time_ms:.3f},{str(r.certified).lower()}"
        )
        if with_sweep:
            row += f",{r.sweep_key or ''}"
        out.write(row + "\n")
    return out.getvalue()


def records_to_json(records: list[TrialRecord]) -> str:
    return json.dumps([asdict(r) for r in records], indent=2)


def distinguish_records_to_csv(records: list[DistinguishRecord]) -> str:
    out = io.StringIO()
    out.write("trial,family,label,correct,fraction_Yj,tau\n")
    for r in records:
        out.write(
            f"{r.trial},{r.family},{r.label},{str(r.correct).lower()},"
            f"{r.fraction_yj!r},{r.tau!r}\n"
        )
    return out.getvalue()


def run_verify_suite(seed: int = 0) -> list[tuple[str, bool]]:
    """A quick, deterministic pass over the key analytic inequalities;
    returns (check name, passed) pairs."""
    rng = child_rng(seed, "verify")
    results: list[tuple[str, bool]] = []

    def check(name: str, ok: bool) -> None:
        results.append((name, bool(ok)))

    # blur: column stochasticity + mean preservation + W-infinity
    ok_cols = ok_mean = ok_winf = True
    for _ in range(20):
        n = int(rng.integers(2, 60))
        s = int(rng.integers(1, 10))
        G = graph_core.generate_er(n, float(rng.random()), int(rng.integers(1 << 31)))
        D = graph_core.degree_pmf(G)
        A = blur.blur_matrix(n, s)
        ok_cols &= bool(np.allclose(A.dense().sum(axis=0), 1.0, atol=1e-12))
        Dh = blur.compressed_blurry(D, s)
        ok_mean &= abs(Dh.mean() - D.mean()) <= 1e-9
        ok_winf &= blur.winf_distance(D, Dh) <= s
    check("blur_columns_stochastic", ok_cols)
    check("blur_mean_preserved", ok_mean)
    check("blur_winf_at_most_s", ok_winf)

    # sensitivity certificates at n = 4 (fast exhaustive)
    n = 4
    for lo, hi in [(0.0, 3.0), (1.0, 4.0)]:
        spec_st = estimators.SoftThresholdSpec(lo, hi)
        bound = math.sqrt(1.0 + n / spec_st.width**2)
        got = analysis.l2_sensitivity_oracle(
            lambda G: estimators._soft_threshold_vector(G, spec_st), n
        )
        check(f"soft_threshold_sensitivity_{lo:g}_{hi:g}", got <= bound + 1e-12)

    # closed forms
    p = PrivacyParams(eps=0.7, delta=0.05)
    lrr0 = analysis.DiscretePMF.from_probs(leaky_rr_pmf(0, p))
    lrr1 = analysis.DiscretePMF.from_probs(leaky_rr_pmf(1, p))
    check(
        "leaky_rr_attains_dp_bound",
        abs(analysis.bhattacharyya(lrr0, lrr1) - analysis.bhatt_dp_bound(p)) <= 1e-12,
    )
    check(
        "group_privacy_formula",
        math.isclose(analysis.group_privacy(PrivacyParams(0.1, 1e-6), 3).eps, 0.3),
    )

    # distinguisher gap at the canonical point
    rep = distinguisher.gap_check(0.4, 0.05)
    check("distinguisher_gap", rep.conditions_hold and rep.gap_ok)

    # splicing inequality, small instance
    srep = analysis.splicing_check(n=30, d=2, sigma=50.0, trials=50, seed=seed)
    check("splicing_inequality", srep.holds)
    return results

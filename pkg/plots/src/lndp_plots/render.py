"""CSV-to-figure rendering for the experiment harness output schemas."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

# stable element ids so identical inputs give byte-identical SVGs
matplotlib.rcParams["svg.hashsalt"] = "lndp-plots"

__all__ = ["PlotJob", "PlotSchemaError", "render", "fit_loglog_slope"]

_KINDS = ("degdist", "scaling", "distinguish")
_FIGSIZE = (8.0, 5.0)


class PlotSchemaError(ValueError):
    """The input CSV lacks a column the plot kind requires."""


@dataclass(frozen=True)
class PlotJob:
    """One figure: input CSVs, a plot kind, and the output image path.

    ``output`` may carry a .png or .svg suffix or none; both formats are
    always written next to each other.
    """

    inputs: tuple[str, ...]
    kind: str
    output: str
    title: str | None = None
    xlabel: str | None = None
    ylabel: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")
        object.__setattr__(self, "inputs", tuple(self.inputs))

    @classmethod
    def from_json(cls, text: str) -> "PlotJob":
        data = json.loads(text)
        known = {"inputs", "kind", "output", "title", "xlabel", "ylabel"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown job key(s): {', '.join(sorted(unknown))}")
        missing = {"inputs", "kind", "output"} - set(data)
        if missing:
            raise ValueError(f"missing job key(s): {', '.join(sorted(missing))}")
        if isinstance(data.get("inputs"), str):
            data["inputs"] = [data["inputs"]]
        return cls(**data)


def _read_csv(path: str) -> dict[str, list[str]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return {}
        cols: dict[str, list[str]] = {name: [] for name in reader.fieldnames}
        for row in reader:
            for name in reader.fieldnames:
                cols[name].append(row[name])
    return cols


def _require(cols: dict[str, list[str]], names: tuple[str, ...], path: str) -> None:
    missing = [n for n in names if n not in cols]
    if missing:
        raise PlotSchemaError(
            f"{path}: missing required column(s): {', '.join(missing)}"
        )


def _floats(cols: dict[str, list[str]], name: str) -> np.ndarray:
    return np.array([float(v) for v in cols[name]])


def fit_loglog_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Ordinary-least-squares slope of log(y) against log(x)."""
    if x.size < 2:
        raise ValueError("need at least two points to fit a slope")
    lx, ly = np.log(x), np.log(y)
    return float(np.polyfit(lx, ly, 1)[0])


def _render_degdist(ax: plt.Axes, job: PlotJob) -> None:
    cols = _read_csv(job.inputs[0])
    if not cols:
        return
    _require(cols, ("index", "degree_value", "estimate", "truth"), job.inputs[0])
    if not cols["index"]:
        return
    x = _floats(cols, "degree_value")
    truth = _floats(cols, "truth")
    est = _floats(cols, "estimate")
    s = float(x[1] - x[0]) if x.size > 1 else 1.0
    ax.bar(x, truth, width=s, alpha=0.2, color="tab:blue",
           label=f"blur band (width {s:g})")
    ax.plot(x, truth, "-", color="tab:blue", label="truth")
    ax.plot(x, est, "o--", color="tab:orange", markersize=3, label="estimate")
    ax.set_xlabel(job.xlabel or "degree")
    ax.set_ylabel(job.ylabel or "probability mass")
    ax.legend()


def _scaling_medians(paths: tuple[str, ...]) -> tuple[np.ndarray, np.ndarray]:
    by_n: dict[float, list[float]] = {}
    for path in paths:
        cols = _read_csv(path)
        if not cols or not cols.get("abs_error"):
            continue
        _require(cols, ("abs_error",), path)
        if "sweep_key" in cols:
            keys = cols["sweep_key"]
        elif "n" in cols:
            keys = cols["n"]
        else:
            raise PlotSchemaError(f"{path}: missing required column(s): sweep_key")
        for key, err in zip(keys, cols["abs_error"]):
            n = float(key.split("=", 1)[1] if "=" in key else key)
            by_n.setdefault(n, []).append(float(err))
    ns = np.array(sorted(by_n))
    medians = np.array([float(np.median(by_n[n])) for n in ns])
    return ns, medians


def _render_scaling(ax: plt.Axes, job: PlotJob) -> None:
    ns, medians = _scaling_medians(job.inputs)
    if ns.size == 0:
        return
    ax.loglog(ns, medians, "o-", label="median |error|")
    if ns.size >= 2:
        slope = fit_loglog_slope(ns, medians)
        fit = medians[0] * (ns / ns[0]) ** slope
        ax.loglog(ns, fit, "--", color="gray",
                  label=f"fit: slope {slope:.2f}")
    ax.set_xlabel(job.xlabel or "graph size n")
    ax.set_ylabel(job.ylabel or "median absolute error")
    ax.legend()


def _render_distinguish(ax: plt.Axes, job: PlotJob) -> None:
    cols = _read_csv(job.inputs[0])
    if not cols:
        return
    _require(
        cols, ("trial", "family", "label", "correct", "fraction_Yj", "tau"),
        job.inputs[0],
    )
    if not cols["trial"]:
        return
    families = sorted(set(cols["family"]))
    fractions = _floats(cols, "fraction_Yj")
    tau = _floats(cols, "tau")
    for offset, family in enumerate(families):
        sel = np.array([f == family for f in cols["family"]])
        acc = np.mean([c == "true" for c, keep in zip(cols["correct"], sel) if keep])
        ax.scatter(
            np.flatnonzero(sel), fractions[sel],
            label=f"{family} (accuracy {acc:.2f})", s=14,
        )
    ax.axhline(tau[0], color="gray", linestyle="--", label="threshold tau")
    ax.set_xlabel(job.xlabel or "trial")
    ax.set_ylabel(job.ylabel or "fraction of in-range columns")
    ax.legend()


def render(job: PlotJob) -> tuple[Path, Path]:
    """Render the job; returns the (png, svg) output paths."""
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    try:
        {
            "degdist": _render_degdist,
            "scaling": _render_scaling,
            "distinguish": _render_distinguish,
        }[job.kind](ax, job)
        ax.set_title(job.title or job.kind)
        if job.xlabel:
            ax.set_xlabel(job.xlabel)
        if job.ylabel:
            ax.set_ylabel(job.ylabel)
        base = Path(job.output)
        if base.suffix in (".png", ".svg"):
            base = base.with_suffix("")
        base.parent.mkdir(parents=True, exist_ok=True)
        png, svg = base.with_suffix(".png"), base.with_suffix(".svg")
        # strip the creation date so identical inputs give identical files
        fig.savefig(png, metadata={"Software": None})
        fig.savefig(svg, metadata={"Date": None})
        return png, svg
    finally:
        plt.close(fig)

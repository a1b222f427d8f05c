"""Figures from locally private graph-statistics experiment CSVs.

Three plot kinds:

- ``degdist``: estimated vs true blurry degree distribution with the
  blur-width band;
- ``scaling``: median absolute error vs graph size on log-log axes with
  a fitted slope;
- ``distinguish``: per-family classification accuracy and the in-range
  column fractions against the decision threshold.

The renderer reads nothing but the job and its CSVs and produces
deterministic PNG + SVG output.
"""

from lndp_plots.render import PlotJob, PlotSchemaError, fit_loglog_slope, render

__all__ = ["PlotJob", "PlotSchemaError", "fit_loglog_slope", "render"]

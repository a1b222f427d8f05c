"""Command-line entry point: ``lndp-plot <job-file>``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from lndp_plots.render import PlotJob, PlotSchemaError, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="lndp-plot",
        description="Render a figure (PNG + SVG) from a JSON plot-job file.",
    )
    parser.add_argument("job_file", help="JSON file describing the plot job")
    args = parser.parse_args(argv)
    try:
        job = PlotJob.from_json(Path(args.job_file).read_text())
        png, svg = render(job)
    except (OSError, ValueError, PlotSchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {png} and {svg}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

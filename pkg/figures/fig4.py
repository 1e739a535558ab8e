#!/usr/bin/env python3
"""Incoherent cavity spectrum with and without the non-secular coupling
(solid / dashed)."""

from pathlib import Path

from csvplot import Curve, FigureSpec, run_script


def make_spec(csv: Path, out: Path) -> FigureSpec:
    """Spectrum vs frequency offset, paired mode curves."""
    return FigureSpec(
        figure_id=4,
        csv_path=csv,
        out_path=out,
        x_column="delta",
        curves=[
            Curve("s_in_nonsecular", "with non-secular terms", "solid"),
            Curve("s_in_secular", "secular approximation", "dashed"),
        ],
        x_label="frequency offset (units of gamma)",
        y_label="incoherent spectrum",
    )


if __name__ == "__main__":
    raise SystemExit(run_script(make_spec))

#!/usr/bin/env python3
"""Incoherent cavity spectrum for three cavity detunings
(dashed 0, dotted -0.16, solid -0.26)."""

from pathlib import Path

from csvplot import Curve, FigureSpec, run_script


def make_spec(csv: Path, out: Path) -> FigureSpec:
    """Spectrum vs frequency offset, one styled curve per detuning."""
    return FigureSpec(
        figure_id=5,
        csv_path=csv,
        out_path=out,
        x_column="delta",
        curves=[
            Curve("s_in_1", "detuning 0", "dashed"),
            Curve("s_in_2", "detuning -0.16", "dotted"),
            Curve("s_in_3", "detuning -0.26", "solid"),
        ],
        x_label="frequency offset (units of gamma)",
        y_label="incoherent spectrum",
    )


if __name__ == "__main__":
    raise SystemExit(run_script(make_spec))

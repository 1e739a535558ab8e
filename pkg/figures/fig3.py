#!/usr/bin/env python3
"""Quadrature variance against the drive-to-detuning ratio for three cavity
detunings (dotted 0, dashed -0.16, solid -0.26)."""

from pathlib import Path

from csvplot import Curve, FigureSpec, run_script


def make_spec(csv: Path, out: Path) -> FigureSpec:
    """Variance vs ratio, one styled curve per detuning."""
    return FigureSpec(
        figure_id=3,
        csv_path=csv,
        out_path=out,
        x_column="ratio",
        curves=[
            Curve("var_1", "detuning 0", "dotted"),
            Curve("var_2", "detuning -0.16", "dashed"),
            Curve("var_3", "detuning -0.26", "solid"),
        ],
        x_label="drive / detuning ratio",
        y_label="normally ordered variance",
    )


if __name__ == "__main__":
    raise SystemExit(run_script(make_spec))

#!/usr/bin/env python3
"""Normally ordered quadrature variance against the quadrature phase
(x-axis in units of pi; CSV carries radians)."""

from pathlib import Path

from csvplot import Curve, FigureSpec, run_script


def make_spec(csv: Path, out: Path) -> FigureSpec:
    """Variance vs phase/pi, closed form plus the secular reference."""
    return FigureSpec(
        figure_id=2,
        csv_path=csv,
        out_path=out,
        x_column="theta",
        x_over_pi=True,
        curves=[
            Curve("value_closed", "with non-secular terms", "solid"),
            Curve("value_exact_secular", "secular approximation", "dashed"),
        ],
        x_label="quadrature phase / pi",
        y_label="normally ordered variance",
        x_range=(0.0, 1.0),
    )


if __name__ == "__main__":
    raise SystemExit(run_script(make_spec))

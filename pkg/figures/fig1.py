#!/usr/bin/env python3
"""Steady photon number against cavity detuning, with and without the
non-secular coupling (solid / dashed)."""

from pathlib import Path

from csvplot import Curve, FigureSpec, run_script


def make_spec(csv: Path, out: Path) -> FigureSpec:
    """Photon number vs detuning, paired mode curves."""
    return FigureSpec(
        figure_id=1,
        csv_path=csv,
        out_path=out,
        x_column="delta_c",
        curves=[
            Curve("n_nonsecular", "with non-secular terms", "solid"),
            Curve("n_secular", "secular approximation", "dashed"),
        ],
        x_label="cavity detuning (units of gamma)",
        y_label="steady photon number",
    )


if __name__ == "__main__":
    raise SystemExit(run_script(make_spec))

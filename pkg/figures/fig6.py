#!/usr/bin/env python3
"""Incoherent spectrum (solid) with the two quadrature noise spectra
(dotted plus-quadrature, dashed minus-quadrature)."""

from pathlib import Path

from csvplot import Curve, FigureSpec, run_script


def make_spec(csv: Path, out: Path) -> FigureSpec:
    """Spectrum and both quadrature noise spectra on one grid."""
    return FigureSpec(
        figure_id=6,
        csv_path=csv,
        out_path=out,
        x_column="delta",
        curves=[
            Curve("s_in", "incoherent spectrum", "solid"),
            Curve("x_plus", "plus-quadrature noise", "dotted"),
            Curve("x_minus", "minus-quadrature noise", "dashed"),
        ],
        x_label="frequency offset (units of gamma)",
        y_label="spectral density",
    )


if __name__ == "__main__":
    raise SystemExit(run_script(make_spec))

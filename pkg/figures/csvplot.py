"""Shared CSV-to-figure plumbing for the six figure scripts.

Strictly file-to-file: a script reads one CSV produced by the simulator CLI
(``#``-prefixed TOML metadata lines, then a comma-separated table), maps
columns onto styled curves, and writes one image.  No physics is recomputed
here; deleting the images and re-rendering reproduces them from CSV alone.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

_STYLES = {"solid": "-", "dashed": "--", "dotted": ":"}


class FigureError(RuntimeError):
    """Raised for malformed specs or CSVs that miss required columns."""


@dataclass(frozen=True)
class Curve:
    column: str
    label: str
    style: str = "solid"

    def __post_init__(self) -> None:
        if self.style not in _STYLES:
            raise FigureError(f"unknown style {self.style!r}; use one of {sorted(_STYLES)}")


@dataclass
class FigureSpec:
    figure_id: int
    csv_path: Path
    out_path: Path
    x_column: str
    curves: list[Curve]
    x_label: str
    y_label: str
    x_over_pi: bool = False  # plot x/pi (CSV keeps radians)
    x_range: tuple[float, float] | None = None
    y_range: tuple[float, float] | None = None
    title: str = ""
    extras: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not 1 <= self.figure_id <= 6:
            raise FigureError(f"figure id must be in 1..6, got {self.figure_id}")
        if not self.curves:
            raise FigureError("at least one curve is required")


def read_table(path: Path | str) -> tuple[dict, dict[str, np.ndarray]]:
    """Parse metadata header and named columns from one CLI CSV."""
    path = Path(path)
    meta_lines: list[str] = []
    header: list[str] | None = None
    rows: list[list[str]] = []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                meta_lines.append(line[1:].strip())
            elif header is None:
                header = line.split(",")
            else:
                rows.append(line.split(","))
    if header is None:
        raise FigureError(f"{path}: no column header found")
    try:
        metadata = tomllib.loads("\n".join(meta_lines))
    except tomllib.TOMLDecodeError as exc:
        raise FigureError(f"{path}: bad metadata header: {exc}") from exc

    columns: dict[str, np.ndarray] = {}
    for idx, name in enumerate(header):
        cells = [row[idx] for row in rows]
        try:
            columns[name] = np.array([float(c) for c in cells])
        except ValueError:
            columns[name] = np.array(cells)  # label columns stay as strings
    return metadata, columns


def build_figure(spec: FigureSpec) -> "plt.Figure":
    """Assemble the matplotlib figure without writing it (used by tests)."""
    metadata, columns = read_table(spec.csv_path)

    missing = [c for c in [spec.x_column] + [cv.column for cv in spec.curves] if c not in columns]
    if missing:
        raise FigureError(
            f"{spec.csv_path}: missing columns {missing}; available: {sorted(columns)}"
        )

    x = columns[spec.x_column]
    if spec.x_over_pi:
        x = x / np.pi

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    plotted = 0
    for curve in spec.curves:
        y = columns[curve.column]
        if np.all(np.isnan(y)):
            continue  # optional column left empty: skip the curve
        ax.plot(x, y, _STYLES[curve.style], label=curve.label, linewidth=1.4)
        plotted += 1
    if plotted == 0:
        raise FigureError(f"{spec.csv_path}: every requested curve was empty")

    ax.set_xlabel(spec.x_label)
    ax.set_ylabel(spec.y_label)
    if spec.x_range is not None:
        ax.set_xlim(*spec.x_range)
    else:
        ax.set_xlim(float(x.min()), float(x.max()))
    if spec.y_range is not None:
        ax.set_ylim(*spec.y_range)
    if spec.title:
        ax.set_title(spec.title)
    if plotted > 1:
        ax.legend(frameon=False)
    ax.axhline(0.0, color="0.7", linewidth=0.6, zorder=0)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> Path:
    """Render the figure to ``spec.out_path`` and return that path."""
    fig = build_figure(spec)
    out = Path(spec.out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=160)
    plt.close(fig)
    return out


def run_script(make_spec, argv=None) -> int:
    """Shared argparse front end: ``--csv`` in, ``--out`` image out."""
    import argparse

    parser = argparse.ArgumentParser(description=make_spec.__doc__)
    parser.add_argument("--csv", required=True, help="input CSV from the simulator CLI")
    parser.add_argument("--out", required=True, help="output image path (png/pdf/svg)")
    args = parser.parse_args(argv)
    try:
        spec = make_spec(Path(args.csv), Path(args.out))
        render(spec)
    except (FigureError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0

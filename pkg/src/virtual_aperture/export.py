"""Artifact writers: plain PGM image, CSV matrices and the metrics JSON.

Matrices are written in display orientation: row 0 is the largest y, columns
run along increasing x.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

PGM_FLOOR_DB = -60.0
PGM_LINE = 70  # plain-PGM line length limit


class ExportError(OSError):
    pass


def display_matrix(values: np.ndarray) -> np.ndarray:
    """(nx, ny) image array -> rows of constant y, top row = max y."""
    return np.asarray(values).T[::-1]


def pgm_levels(magnitude, floor_db: float = PGM_FLOOR_DB) -> np.ndarray:
    """8-bit grey levels 255*(1 + dB/|floor|) with dB relative to the peak, clamped."""
    mag = np.abs(np.asarray(magnitude, dtype=float))
    peak = mag.max() if mag.size else 0.0
    if peak == 0 or np.all(mag == peak):
        return np.full(mag.shape, 255, dtype=int)
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(mag / peak)
    levels = np.rint(255.0 * (1.0 + db / -floor_db))
    return np.clip(levels, 0, 255).astype(int)


def pgm_text(magnitude, floor_db: float = PGM_FLOOR_DB) -> str:
    levels = pgm_levels(magnitude, floor_db)
    rows, cols = levels.shape
    lines = ["P2", f"{cols} {rows}", "255"]
    for row in levels:
        line = ""
        for v in row:
            token = str(int(v))
            if line and len(line) + 1 + len(token) > PGM_LINE:
                lines.append(line)
                line = token
            else:
                line = f"{line} {token}" if line else token
        lines.append(line)
    return "\n".join(lines) + "\n"


def csv_text(matrix) -> str:
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    return "".join(",".join(repr(float(v)) for v in row) + "\n" for row in m)


def read_csv(path) -> np.ndarray:
    text = Path(path).read_text(encoding="utf-8")
    return np.array([[float(v) for v in line.split(",")] for line in text.splitlines() if line])


def _write(path: Path, text: str):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc.strerror or exc}") from exc


def export(result, out_dir, dump_cube: bool = False) -> list[Path]:
    """Write image.pgm, image.csv, metrics.json (and cube_real/imag.csv)."""
    out = Path(out_dir)
    try:
        os.makedirs(out, exist_ok=True)
    except OSError as exc:
        raise ExportError(f"cannot create {out}: {exc.strerror or exc}") from exc
    mag = display_matrix(result.image.magnitude)
    written = []
    for name, text in (
        ("image.pgm", pgm_text(mag)),
        ("image.csv", csv_text(mag)),
        ("metrics.json", json.dumps(result.report, indent=2, sort_keys=True) + "\n"),
    ):
        _write(out / name, text)
        written.append(out / name)
    if dump_cube:
        for name, part in (("cube_real.csv", result.cube.samples.real), ("cube_imag.csv", result.cube.samples.imag)):
            _write(out / name, csv_text(part))
            written.append(out / name)
    return written

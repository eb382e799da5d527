"""CSV and SVG serialization of sweeps, orbits and field grids."""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

import numpy as np

from vvhom.lab.fitting import FitResult
from vvhom.lab.sweeps import FieldGrid, OrbitTrace, SweepRecord

SWEEP_HEADER = ("x", "p_model", "counts", "sigma")
ORBIT_HEADER = ("delta_rad", "s1", "s2", "s3")
FIELD_HEADER = ("x", "y", "intensity", "ellipse_angle_rad", "ellipticity")


class ExportError(OSError):
    pass


def fmt(value) -> str:
    """17 significant digits; integers and flags verbatim."""
    if value is None:
        return ""
    if isinstance(value, bool) or isinstance(value, (int, np.integer)):
        return str(value)
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _csv(header: Sequence[str], rows: Iterable[Sequence], metadata: Sequence[str] | None) -> bytes:
    buf = io.StringIO()
    for line in metadata or ():
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue().encode()


def records_to_csv(records: Sequence[SweepRecord], metadata: Sequence[str] | None = None) -> bytes:
    if not records:
        raise ValueError("no records to export")
    return _csv(SWEEP_HEADER, ((r.x, r.p_model, r.counts, r.sigma) for r in records), metadata)


def orbit_to_csv(trace: OrbitTrace, metadata: Sequence[str] | None = None) -> bytes:
    if not trace.points:
        raise ValueError("empty orbit")
    rows = ((d, p.s1, p.s2, p.s3) for d, p in zip(trace.deltas, trace.points))
    return _csv(ORBIT_HEADER, rows, metadata)


def field_to_csv(grid: FieldGrid, metadata: Sequence[str] | None = None) -> bytes:
    if not grid.samples:
        raise ValueError("empty field grid")
    rows = []
    it = iter(grid.samples)
    for y in grid.ys:
        for x in grid.xs:
            s = next(it)
            angle, ell = s.ellipse()
            rows.append((x, y, s.intensity, angle, ell))
    return _csv(FIELD_HEADER, rows, metadata)


def fit_to_csv(fit: FitResult, metadata: Sequence[str] | None = None) -> bytes:
    return _csv(("parameter", "value"), fit.as_rows(), metadata)


def read_records(path: str | Path) -> list[SweepRecord]:
    """Parse a sweep CSV written by :func:`records_to_csv`."""
    path = Path(path)
    try:
        lines = [ln for ln in path.read_text().splitlines() if ln and not ln.startswith("#")]
    except OSError as exc:
        raise ExportError(f"cannot read {path}: {exc.strerror}") from None
    reader = csv.DictReader(lines)
    if tuple(reader.fieldnames or ()) != SWEEP_HEADER:
        raise ValueError(f"{path}: expected header {','.join(SWEEP_HEADER)}")
    out = []
    for row in reader:
        counts = int(round(float(row["counts"])))
        sigma = float(row["sigma"]) if row["sigma"] else math.sqrt(counts)
        out.append(SweepRecord(float(row["x"]), float(row["p_model"]), counts, sigma))
    return out


# SVG -----------------------------------------------------------------------

_W, _H, _PAD = 640, 400, 50


class _Axes:
    def __init__(self, xlo, xhi, ylo, yhi):
        if xhi <= xlo:
            xhi = xlo + 1.0
        if yhi <= ylo:
            yhi = ylo + 1.0
        self.xlo, self.xhi, self.ylo, self.yhi = xlo, xhi, ylo, yhi

    def px(self, x):
        return _PAD + (x - self.xlo) / (self.xhi - self.xlo) * (_W - 2 * _PAD)

    def py(self, y):
        return _H - _PAD - (y - self.ylo) / (self.yhi - self.ylo) * (_H - 2 * _PAD)


def _frame(title: str, ax: _Axes, xlabel: str, ylabel: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f"<title>{escape(title)}</title>",
        f'<rect class="frame" x="{_PAD}" y="{_PAD}" width="{_W - 2 * _PAD}" height="{_H - 2 * _PAD}" '
        'fill="none" stroke="black"/>',
        f'<text x="{_W / 2:.1f}" y="{_H - 12}" text-anchor="middle" font-size="13">{escape(xlabel)}</text>',
        f'<text x="14" y="{_H / 2:.1f}" transform="rotate(-90 14 {_H / 2:.1f})" text-anchor="middle" '
        f'font-size="13">{escape(ylabel)}</text>',
        f'<text x="{_PAD}" y="{_PAD - 8}" font-size="11">[{ax.xlo:.4g}, {ax.xhi:.4g}] x [{ax.ylo:.4g}, {ax.yhi:.4g}]</text>',
    ]


def _polyline(ax: _Axes, xs, ys, cls: str, color: str) -> str:
    pts = " ".join(f"{ax.px(x):.2f},{ax.py(y):.2f}" for x, y in zip(xs, ys))
    return f'<polyline class="{cls}" points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'


def records_to_svg(records: Sequence[SweepRecord], fit: FitResult | None = None, title: str = "coincidences") -> bytes:
    if not records:
        raise ValueError("no records to export")
    xs = np.array([r.x for r in records])
    counts = np.array([r.counts for r in records], dtype=float)
    sig = np.array([r.sigma for r in records])
    curve_x = np.linspace(xs.min(), xs.max(), 400)
    curve_y = fit.predict(curve_x) if fit is not None else None
    top = max(float(np.max(counts + sig)), float(np.max(curve_y)) if curve_y is not None else 0.0)
    ax = _Axes(float(xs.min()), float(xs.max()), 0.0, top * 1.05 if top > 0 else 1.0)
    parts = _frame(title, ax, "x", "counts")
    for x, c, s in zip(xs, counts, sig):
        parts.append(
            f'<line class="errorbar" x1="{ax.px(x):.2f}" y1="{ax.py(c - s):.2f}" '
            f'x2="{ax.px(x):.2f}" y2="{ax.py(c + s):.2f}" stroke="gray"/>'
        )
    for x, c in zip(xs, counts):
        parts.append(f'<circle class="marker" cx="{ax.px(x):.2f}" cy="{ax.py(c):.2f}" r="3" fill="black"/>')
    if curve_y is not None:
        parts.append(_polyline(ax, curve_x, curve_y, "fit", "crimson"))
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode()


def orbit_to_svg(trace: OrbitTrace) -> bytes:
    if not trace.points:
        raise ValueError("empty orbit")
    d = list(trace.deltas)
    ax = _Axes(min(d), max(d), -1.05, 1.05)
    parts = _frame(f"orbit, alpha0 = {trace.alpha0:.4g} rad", ax, "delta (rad)", "Stokes component")
    for name, color in (("s1", "steelblue"), ("s2", "seagreen"), ("s3", "crimson")):
        parts.append(_polyline(ax, d, [getattr(p, name) for p in trace.points], name, color))
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode()


def field_to_svg(grid: FieldGrid) -> bytes:
    if not grid.samples:
        raise ValueError("empty field grid")
    xs, ys = grid.xs, grid.ys
    ax = _Axes(xs[0], xs[-1], ys[0], ys[-1])
    parts = _frame("transverse polarization", ax, "x / w", "y / w")
    cw = (_W - 2 * _PAD) / max(len(xs) - 1, 1)
    ch = (_H - 2 * _PAD) / max(len(ys) - 1, 1)
    cell = min(cw, ch)
    peak = max(s.intensity for s in grid.samples) or 1.0
    it = iter(grid.samples)
    for y in ys:
        for x in xs:
            s = next(it)
            level = int(255 * (1.0 - s.intensity / peak))
            parts.append(
                f'<rect class="pixel" x="{ax.px(x) - cw / 2:.2f}" y="{ax.py(y) - ch / 2:.2f}" '
                f'width="{cw:.2f}" height="{ch:.2f}" fill="rgb({level},{level},{level})"/>'
            )
            if s.intensity / peak > 0.05:
                angle, _ = s.ellipse()
                dx, dy = 0.4 * cell * math.cos(angle), 0.4 * cell * math.sin(angle)
                cx, cy = ax.px(x), ax.py(y)
                parts.append(
                    f'<line class="director" x1="{cx - dx:.2f}" y1="{cy + dy:.2f}" '
                    f'x2="{cx + dx:.2f}" y2="{cy - dy:.2f}" stroke="orange"/>'
                )
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode()


def export(data, fmt: str = "csv", *, fit: FitResult | None = None, metadata: Sequence[str] | None = None) -> bytes:
    """Serialize sweep records, an :class:`OrbitTrace` or a :class:`FieldGrid`."""
    fmt = fmt.lower()
    if fmt not in ("csv", "svg"):
        raise ValueError(f"unknown export format {fmt!r}")
    if isinstance(data, OrbitTrace):
        return orbit_to_csv(data, metadata) if fmt == "csv" else orbit_to_svg(data)
    if isinstance(data, FieldGrid):
        return field_to_csv(data, metadata) if fmt == "csv" else field_to_svg(data)
    if isinstance(data, FitResult):
        if fmt != "csv":
            raise ValueError("fit results export only as CSV")
        return fit_to_csv(data, metadata)
    records = list(data)
    return records_to_csv(records, metadata) if fmt == "csv" else records_to_svg(records, fit)


def write_output(path: str | Path, payload: bytes) -> None:
    path = Path(path)
    try:
        path.write_bytes(payload)
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc.strerror}") from exc

"""Parameter sweeps over filtered squeezed-coherent and cat states.

A sweep evaluates, for every grid point and every requested hole, the heralding
probability and the output-state metrics alongside the same metrics for the
unfiltered input. Results serialize to CSV (12 significant digits) or JSON,
and optionally to a small self-rendered SVG line chart.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .errors import FockFilterError
from .filter import FilterConfig, alpha_for_hole, alpha_for_parity, filtered_state
from .fock import DEFAULT_CUTOFF, FockVector, cat_state, squeezed_coherent_state
from .metrics import mandel_q, mean_photon_number, quadratures

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

FAMILIES = ("squeezed_coherent", "cat")
VARIABLES = ("gamma_abs", "s")
PARITY_HOLES = ("even", "odd")
METRICS = ("p", "Q", "var_x", "var_y", "mean_n")
DEFAULT_STEPS = 81
HALF = math.pi / 4

COLUMNS = [
    "value", "hole", "alpha_re", "alpha_im", "p", "Q", "var_x", "var_y", "mean_n",
    "input_Q", "input_var_x", "input_var_y", "input_mean_n", "flag",
]


class SpecError(ValueError):
    """Invalid sweep specification (a usage error, not a numeric one)."""


@dataclass(frozen=True)
class SweepSpec:
    family: str
    variable: str
    start: float
    stop: float
    steps: int = DEFAULT_STEPS
    holes: tuple[str, ...] = ("n=0", "n=1")
    s: float = 1.0
    gamma_abs: float = 0.5
    beta: float = 0.0
    squeeze_phase: float = 0.0
    delta: float = math.pi / 2
    theta1: float = HALF
    theta2: float = HALF
    cutoff: int = DEFAULT_CUTOFF
    title: str = ""
    plot_metric: str = "Q"
    x_range: tuple[float, float] | None = None
    y_range: tuple[float, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "holes", tuple(self.holes))
        for name in ("x_range", "y_range"):
            val = getattr(self, name)
            if val is not None:
                object.__setattr__(self, name, tuple(float(v) for v in val))
        self.validate()

    def validate(self):
        if self.family not in FAMILIES:
            raise SpecError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.variable not in VARIABLES:
            raise SpecError(f"variable must be one of {VARIABLES}, got {self.variable!r}")
        if self.family == "cat" and self.variable != "gamma_abs":
            raise SpecError("cat sweeps run over gamma_abs only")
        if self.steps < 2:
            raise SpecError("steps must be >= 2")
        if not self.start < self.stop:
            raise SpecError("range needs start < stop")
        if self.start < 0:
            raise SpecError("swept magnitudes must be non-negative")
        for name in ("theta1", "theta2"):
            theta = getattr(self, name)
            if not 0 < theta < math.pi / 2:
                raise SpecError(f"{name}={theta} must lie in (0, pi/2)")
        if self.cutoff < 8:
            raise SpecError("cutoff must be >= 8")
        if not self.holes:
            raise SpecError("at least one hole selector is required")
        for hole in self.holes:
            parse_hole(hole, self.family)
        if self.plot_metric not in METRICS:
            raise SpecError(f"plot_metric must be one of {METRICS}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    def as_dict(self) -> dict:
        out = asdict(self)
        out["holes"] = list(self.holes)
        for name in ("x_range", "y_range"):
            if out[name] is not None:
                out[name] = list(out[name])
        return out

    @classmethod
    def from_mapping(cls, data: dict, overrides: dict | None = None) -> SweepSpec:
        flat = dict(data)
        plot = flat.pop("plot", {}) or {}
        for key, dest in (("metric", "plot_metric"), ("x_range", "x_range"), ("y_range", "y_range")):
            if key in plot:
                flat[dest] = plot[key]
        flat.update({k: v for k, v in (overrides or {}).items() if v is not None})
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(flat) - known)
        if unknown:
            raise SpecError(f"unknown sweep keys: {', '.join(unknown)}")
        missing = [k for k in ("family", "variable", "start", "stop") if k not in flat]
        if missing:
            raise SpecError(f"missing sweep keys: {', '.join(missing)}")
        try:
            return cls(**flat)
        except TypeError as exc:
            raise SpecError(str(exc)) from exc


def load_spec(path: str | Path, overrides: dict | None = None) -> SweepSpec:
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise SpecError(f"{path}: {exc}") from exc
    return SweepSpec.from_mapping(data, overrides)


def shipped_figures() -> list[str]:
    root = resources.files("fockfilter") / "figures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".toml"))


def load_figure(name: str, overrides: dict | None = None) -> SweepSpec:
    res = resources.files("fockfilter") / "figures" / f"{name}.toml"
    if not res.is_file():
        raise SpecError(f"no shipped figure {name!r}; available: {', '.join(shipped_figures())}")
    with res.open("rb") as fh:
        data = tomllib.load(fh)
    return SweepSpec.from_mapping(data, overrides)


def parse_hole(hole: str, family: str) -> tuple[str, int | str]:
    """'n=3' -> ('index', 3); 'even'/'odd' -> ('parity', name)."""
    text = hole.strip().lower()
    if text in PARITY_HOLES:
        if family != "cat":
            raise SpecError(f"parity hole {hole!r} applies to the cat family only")
        return "parity", text
    if text.startswith("n="):
        try:
            n = int(text[2:])
        except ValueError:
            raise SpecError(f"bad hole selector {hole!r}") from None
        if n < 0:
            raise SpecError(f"bad hole selector {hole!r}")
        return "index", n
    raise SpecError(f"bad hole selector {hole!r}; use n=<k>, even or odd")


def input_state(spec: SweepSpec, value: float) -> tuple[FockVector, complex]:
    """The unfiltered state at one grid point, plus its complex gamma."""
    gamma_abs = value if spec.variable == "gamma_abs" else spec.gamma_abs
    s = value if spec.variable == "s" else spec.s
    gamma = gamma_abs * np.exp(1j * spec.beta)
    if spec.family == "cat":
        return cat_state(gamma, spec.delta, spec.cutoff), gamma
    xi = s * np.exp(1j * spec.squeeze_phase)
    return squeezed_coherent_state(gamma, xi, spec.cutoff), gamma


def _metrics(state: FockVector, flags: list[str], prefix: str = "") -> dict:
    out = {}
    try:
        out["Q"] = mandel_q(state)
    except FockFilterError as exc:
        out["Q"] = None
        flags.append(f"{prefix}Q:{type(exc).__name__}")
    try:
        quad = quadratures(state)
        out["var_x"], out["var_y"] = quad.var_x, quad.var_y
    except FockFilterError as exc:
        out["var_x"] = out["var_y"] = None
        flags.append(f"{prefix}var:{type(exc).__name__}")
    out["mean_n"] = mean_photon_number(state)
    return out


def evaluate_point(spec: SweepSpec, value: float) -> list[dict]:
    """One row per hole selector at a single grid value."""
    rows = []
    base = {col: None for col in COLUMNS}
    base["value"] = float(value)
    try:
        phi, gamma = input_state(spec, value)
    except FockFilterError as exc:
        for hole in spec.holes:
            rows.append({**base, "hole": hole, "flag": f"input:{type(exc).__name__}"})
        return rows
    input_flags: list[str] = []
    ref = _metrics(phi, input_flags, prefix="input_")
    for hole in spec.holes:
        row = dict(base, hole=hole)
        row.update({f"input_{k}": v for k, v in ref.items()})
        flags = list(input_flags)
        try:
            kind, which = parse_hole(hole, spec.family)
            if kind == "parity":
                alpha = alpha_for_parity(gamma, spec.delta, spec.theta1, spec.theta2, which)
            else:
                alpha = alpha_for_hole(phi, which, spec.theta1, spec.theta2)
            row["alpha_re"], row["alpha_im"] = alpha.real, alpha.imag
            config = FilterConfig.from_alpha(spec.theta1, spec.theta2, alpha)
            result = filtered_state(phi, config, check=False)
            row["p"] = result.probability
            row.update(_metrics(result.normalized(), flags))
        except FockFilterError as exc:
            flags.append(type(exc).__name__)
        row["flag"] = ";".join(flags)
        rows.append(row)
    return rows


def run_sweep(spec: SweepSpec) -> list[dict]:
    rows = []
    for value in spec.grid():
        rows.extend(evaluate_point(spec, value))
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if value == 0:
        return "0"
    return f"{value:.12g}"


def metadata(spec: SweepSpec) -> dict:
    return {"generator": "fockfilter", "version": __version__, "cutoff": spec.cutoff,
            "spec": spec.as_dict()}


def to_csv(spec: SweepSpec, rows: list[dict]) -> str:
    buf = io.StringIO()
    meta = metadata(spec)
    buf.write(f"# fockfilter {meta['version']} sweep, cutoff {spec.cutoff}\n")
    buf.write(f"# spec: {json.dumps(meta['spec'], sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[col]) for col in COLUMNS])
    return buf.getvalue()


def to_json(spec: SweepSpec, rows: list[dict]) -> str:
    return json.dumps({"metadata": metadata(spec), "rows": rows}, indent=2, sort_keys=True) + "\n"


def read_csv(text: str) -> list[dict]:
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(lines))


# ---------------------------------------------------------------------- SVG

_COLORS = {"input": "#2ca02c", 0: "#1f77b4", 1: "#ff7f0e", 2: "#d62728", 3: "#9467bd"}
_WIDTH, _HEIGHT, _MARGIN = 640, 420, 60


def _segments(xs, ys):
    seg: list[tuple[float, float]] = []
    for x, y in zip(xs, ys):
        if y is None or not math.isfinite(y):
            if len(seg) > 1:
                yield seg
            seg = []
        else:
            seg.append((x, y))
    if len(seg) > 1:
        yield seg


def to_svg(spec: SweepSpec, rows: list[dict]) -> str:
    metric = spec.plot_metric
    x_lo, x_hi = spec.x_range or (spec.start, spec.stop)
    series: dict[str, tuple[list, list]] = {}
    for row in rows:
        xs, ys = series.setdefault(row["hole"], ([], []))
        xs.append(row["value"])
        ys.append(row[metric])
    ref_key = f"input_{metric}" if metric != "p" else None
    if ref_key:
        first = spec.holes[0]
        series["input"] = (
            [r["value"] for r in rows if r["hole"] == first],
            [r[ref_key] for r in rows if r["hole"] == first],
        )
    if spec.y_range:
        y_lo, y_hi = spec.y_range
    else:
        vals = [y for _, ys in series.values() for y in ys if y is not None]
        y_lo, y_hi = (min(vals), max(vals)) if vals else (0.0, 1.0)
        if y_hi <= y_lo:
            y_hi = y_lo + 1.0

    def px(x):
        return _MARGIN + (x - x_lo) / (x_hi - x_lo) * (_WIDTH - 2 * _MARGIN)

    def py(y):
        y = min(max(y, y_lo), y_hi)
        return _HEIGHT - _MARGIN - (y - y_lo) / (y_hi - y_lo) * (_HEIGHT - 2 * _MARGIN)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{_WIDTH - 2 * _MARGIN}" '
        f'height="{_HEIGHT - 2 * _MARGIN}" fill="none" stroke="black"/>',
    ]
    for i in range(5):
        xv = x_lo + i * (x_hi - x_lo) / 4
        yv = y_lo + i * (y_hi - y_lo) / 4
        out.append(f'<text x="{px(xv):.2f}" y="{_HEIGHT - _MARGIN + 18}" font-size="12" '
                   f'text-anchor="middle">{xv:.4g}</text>')
        out.append(f'<text x="{_MARGIN - 6}" y="{py(yv) + 4:.2f}" font-size="12" '
                   f'text-anchor="end">{yv:.4g}</text>')
    xlabel = "|gamma|" if spec.variable == "gamma_abs" else "s"
    out.append(f'<text x="{_WIDTH / 2}" y="{_HEIGHT - 15}" font-size="14" '
               f'text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="{_WIDTH / 2}" y="30" font-size="14" text-anchor="middle">'
               f'{spec.title or metric}</text>')
    for idx, (name, (xs, ys)) in enumerate(series.items()):
        color = _COLORS["input"] if name == "input" else _COLORS.get(idx, "#333333")
        dash = ' stroke-dasharray="8,4,2,4"' if name == "input" else ""
        for seg in _segments(xs, ys):
            pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in seg if x_lo <= x <= x_hi)
            out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                       f'stroke-width="1.5"{dash}/>')
        out.append(f'<text x="{_WIDTH - _MARGIN - 4}" y="{_MARGIN + 16 * (idx + 1)}" '
                   f'font-size="12" text-anchor="end" fill="{color}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

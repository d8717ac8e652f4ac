"""JSON scenario schema: strict parsing, defaults and canonical serialization.

Every key is optional; ``{}`` is the far-field reference setup. Unknown keys
are rejected with the dotted path of the offending key. See README.md for the
full schema.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from importlib import resources

from .core import RisArray, Scene, Target, Vec2, as_vec2
from .imaging import GridSpec
from .ris_control import WindowKind, WindowSpec
from .signal import ChirpParams

MODES = ("far", "near", "sar")
PROPAGATION = ("exact", "planar")
CUTS = ("isorange", "x", "y")
DEFAULT_CUT_HALF_LENGTH = {"far": 1.5, "near": 0.4, "sar": 0.15}


class ScenarioError(ValueError):
    """Invalid scenario; ``key`` is the dotted path of the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


@dataclass(frozen=True)
class Trajectory:
    span_deg: float = 20.0
    num_positions: int = 20
    aim: str | Vec2 = "mirror"  # "mirror", "grid_center" or a point


@dataclass(frozen=True)
class CutSpec:
    kind: str = "isorange"
    half_length: float = 1.5
    samples: int = 1201


@dataclass(frozen=True)
class Scenario:
    name: str
    mode: str
    chirp: ChirpParams
    scene: Scene
    trajectory: Trajectory
    window: WindowSpec
    synthesis: str
    filter: str
    snr_db: float | None
    seed: int
    grid: GridSpec
    subregions: tuple[int, int]
    cut: CutSpec
    constant_phase: bool = False
    direct_path: bool = False
    spreading: bool = False

    def aim_point(self) -> Vec2 | None:
        if self.trajectory.aim == "mirror":
            return None
        if self.trajectory.aim == "grid_center":
            g = self.grid
            return Vec2(g.origin.x + 0.5 * (g.nx - 1) * g.dx, g.origin.y + 0.5 * (g.ny - 1) * g.dy)
        return self.trajectory.aim


class _Section:
    """Consumes keys from one JSON object, remembering its path for errors."""

    def __init__(self, data, path: str):
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ScenarioError(path, "expected an object")
        self.data = dict(data)
        self.path = path

    def key(self, name: str) -> str:
        return f"{self.path}.{name}" if self.path else name

    def take(self, name, default, kind=float):
        if name not in self.data:
            return default
        value = self.data.pop(name)
        if value is None:
            return default
        try:
            if kind is float:
                if isinstance(value, bool):
                    raise TypeError
                out = float(value)
            elif kind is int:
                if isinstance(value, bool) or int(value) != value:
                    raise TypeError
                out = int(value)
            elif kind is bool:
                if not isinstance(value, bool):
                    raise TypeError
                out = value
            elif kind is str:
                if not isinstance(value, str):
                    raise TypeError
                out = value
            elif kind is Vec2:
                if isinstance(value, (str, bytes)) or len(value) != 2:
                    raise TypeError
                out = as_vec2(value)
            else:
                out = value
        except (TypeError, ValueError):
            raise ScenarioError(self.key(name), f"invalid value {value!r}") from None
        return out

    def section(self, name) -> "_Section":
        return _Section(self.data.pop(name, None), self.key(name))

    def finish(self):
        if self.data:
            raise ScenarioError(self.key(sorted(self.data)[0]), "unknown key")


def _check(cond, key, message):
    if not cond:
        raise ScenarioError(key, message)


def parse_scenario(text: str | bytes | dict, overrides: dict | None = None) -> Scenario:
    if isinstance(text, dict):
        raw = copy.deepcopy(text)
    else:
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioError("", f"malformed JSON: {exc}") from None
    if overrides:
        raw = _merge(raw, overrides)
    root = _Section(raw, "")

    name = root.take("name", "scenario", str)
    mode = root.take("mode", "far", str)
    _check(mode in MODES, "mode", f"must be one of {MODES}")

    ch = root.section("chirp")
    carrier = ch.take("carrier_hz", 120e9)
    _check(carrier > 0, ch.key("carrier_hz"), "must be positive")
    bandwidth = ch.take("bandwidth_hz", 10e9)
    _check(bandwidth >= 0, ch.key("bandwidth_hz"), "must be non-negative")
    duration = ch.take("duration_s", 1e-6)
    _check(duration > 0, ch.key("duration_s"), "must be positive")
    samples = ch.take("num_samples", 1024, int)
    _check(samples >= 1, ch.key("num_samples"), "must be at least 1")
    amplitude = ch.take("amplitude", 1.0)
    _check(amplitude > 0, ch.key("amplitude"), "must be positive")
    ch.finish()
    chirp = ChirpParams(carrier, bandwidth, duration, samples, amplitude)

    sc = root.section("scene")
    c = sc.take("speed_of_light", 3.0e8)
    _check(c > 0, sc.key("speed_of_light"), "must be positive")
    far = mode != "near"
    radar = sc.take("radar", Vec2(2.0, 2.0) if far else Vec2(0.0, 0.0), Vec2)
    rs = sc.section("ris")
    center = rs.take("center", Vec2(3.0, 4.0) if far else Vec2(1.0, 3.0), Vec2)
    direction = rs.take("direction", Vec2(1.0, 0.0), Vec2)
    _check(abs(math.hypot(*direction) - 1.0) <= 1e-12, rs.key("direction"), "must be a unit vector")
    num_elements = rs.take("num_elements", 16 if far else 128, int)
    _check(num_elements >= 1, rs.key("num_elements"), "must be at least 1")
    spacing = rs.take("spacing_m", c / carrier / 2.0)
    _check(spacing > 0, rs.key("spacing_m"), "must be positive")
    rs.finish()
    targets_raw = sc.data.pop("targets", None)
    if targets_raw is None:
        targets_raw = [{"position": [4.0, 2.0] if far else [3.0, 1.0]}]
    _check(isinstance(targets_raw, list) and targets_raw, sc.key("targets"), "must be a non-empty list")
    targets = []
    for i, t in enumerate(targets_raw):
        ts = _Section(t, f"{sc.key('targets')}[{i}]")
        pos = ts.take("position", None, Vec2)
        _check(pos is not None, ts.key("position"), "required")
        refl = ts.take("reflectivity", [1.0, 0.0], object)
        try:
            re, im = (float(v) for v in refl)
        except (TypeError, ValueError):
            raise ScenarioError(ts.key("reflectivity"), "expected [real, imag]") from None
        _check(math.isfinite(re) and math.isfinite(im), ts.key("reflectivity"), "must be finite")
        ts.finish()
        targets.append(Target(pos, complex(re, im)))
    sc.finish()
    try:
        scene = Scene(radar, RisArray(center, num_elements, spacing, direction), tuple(targets), c)
    except ValueError as exc:
        raise ScenarioError("scene", str(exc)) from None

    tr = root.section("trajectory")
    span = tr.take("span_deg", 20.0)
    _check(span >= 0, tr.key("span_deg"), "must be non-negative")
    positions = tr.take("num_positions", 20, int)
    _check(positions >= 1, tr.key("num_positions"), "must be at least 1")
    aim_raw = tr.data.pop("aim", None)
    if aim_raw is None:
        aim = "mirror"
    elif aim_raw in ("mirror", "grid_center"):
        aim = aim_raw
    else:
        try:
            aim = as_vec2(aim_raw)
        except (TypeError, ValueError):
            raise ScenarioError(tr.key("aim"), "expected 'mirror', 'grid_center' or [x, y]") from None
    tr.finish()
    trajectory = Trajectory(span, positions, aim)

    wi = root.section("window")
    kind = wi.take("kind", "rect", str)
    _check(kind in ("rect", "hamming", "gaussian"), wi.key("kind"), "must be rect, hamming or gaussian")
    reference = wi.take("reference", None, Vec2)
    symmetry = wi.take("symmetry", "line", str)
    _check(symmetry in ("line", "center"), wi.key("symmetry"), "must be line or center")
    sigma_scale = wi.take("sigma_scale", 1.0)
    _check(sigma_scale > 0, wi.key("sigma_scale"), "must be positive")
    wi.finish()
    _check(not (kind == "gaussian" and mode == "far"), "window.kind", "far-field programs take rect or hamming")
    window = WindowSpec(WindowKind(kind), reference, symmetry, sigma_scale)

    pr = root.section("propagation")
    synthesis = pr.take("synthesis", "exact", str)
    _check(synthesis in PROPAGATION, pr.key("synthesis"), f"must be one of {PROPAGATION}")
    filt = pr.take("filter", "planar" if mode == "far" else "exact", str)
    _check(filt in PROPAGATION, pr.key("filter"), f"must be one of {PROPAGATION}")
    pr.finish()

    snr_raw = root.data.pop("snr_db", 20.0)
    if snr_raw is None or snr_raw == "none":
        snr_db = None
    else:
        try:
            if isinstance(snr_raw, bool):
                raise TypeError
            snr_db = float(snr_raw)
        except (TypeError, ValueError):
            raise ScenarioError("snr_db", f"invalid value {snr_raw!r}") from None
        _check(not math.isnan(snr_db), "snr_db", "must be a number or 'none'")
        if snr_db == math.inf:
            snr_db = None
    seed = root.take("seed", 7, int)
    _check(seed >= 0, "seed", "must be non-negative")

    gr = root.section("grid")
    anchor = targets[0].position
    spacing_px = gr.take("dx", 0.02)
    _check(spacing_px > 0, gr.key("dx"), "must be positive")
    dy = gr.take("dy", spacing_px)
    _check(dy > 0, gr.key("dy"), "must be positive")
    nx = gr.take("nx", 41, int)
    _check(nx >= 1, gr.key("nx"), "must be at least 1")
    ny = gr.take("ny", 41, int)
    _check(ny >= 1, gr.key("ny"), "must be at least 1")
    origin = gr.take(
        "origin",
        Vec2(anchor.x - (nx - 1) // 2 * spacing_px, anchor.y - (ny - 1) // 2 * dy),
        Vec2,
    )
    gr.finish()
    grid = GridSpec(origin, spacing_px, dy, nx, ny)

    su = root.section("subregions")
    gx = su.take("gx", 4, int)
    gy = su.take("gy", 4, int)
    _check(1 <= gx <= nx, su.key("gx"), "must be between 1 and grid.nx")
    _check(1 <= gy <= ny, su.key("gy"), "must be between 1 and grid.ny")
    su.finish()

    cu = root.section("cut")
    cut_kind = cu.take("kind", "isorange", str)
    _check(cut_kind in CUTS, cu.key("kind"), f"must be one of {CUTS}")
    half = cu.take("half_length_m", DEFAULT_CUT_HALF_LENGTH[mode])
    _check(half > 0, cu.key("half_length_m"), "must be positive")
    cut_samples = cu.take("samples", 1201, int)
    _check(cut_samples >= 3 and cut_samples % 2 == 1, cu.key("samples"), "must be odd and >= 3")
    cu.finish()

    op = root.section("options")
    constant_phase = op.take("constant_phase", False, bool)
    direct_path = op.take("direct_path", False, bool)
    spreading = op.take("spreading", False, bool)
    op.finish()
    root.finish()

    return Scenario(
        name=name,
        mode=mode,
        chirp=chirp,
        scene=scene,
        trajectory=trajectory,
        window=window,
        synthesis=synthesis,
        filter=filt,
        snr_db=snr_db,
        seed=seed,
        grid=grid,
        subregions=(gx, gy),
        cut=CutSpec(cut_kind, half, cut_samples),
        constant_phase=constant_phase,
        direct_path=direct_path,
        spreading=spreading,
    )


def scenario_to_dict(s: Scenario) -> dict:
    ris = s.scene.ris
    aim = s.trajectory.aim if isinstance(s.trajectory.aim, str) else list(s.trajectory.aim)
    return {
        "name": s.name,
        "mode": s.mode,
        "chirp": {
            "carrier_hz": s.chirp.carrier,
            "bandwidth_hz": s.chirp.bandwidth,
            "duration_s": s.chirp.duration,
            "num_samples": s.chirp.num_samples,
            "amplitude": s.chirp.amplitude,
        },
        "scene": {
            "radar": list(s.scene.radar),
            "ris": {
                "center": list(ris.center),
                "direction": list(ris.direction),
                "num_elements": ris.num_elements,
                "spacing_m": ris.spacing,
            },
            "targets": [
                {"position": list(t.position), "reflectivity": [t.reflectivity.real, t.reflectivity.imag]}
                for t in s.scene.targets
            ],
            "speed_of_light": s.scene.speed_of_light,
        },
        "trajectory": {"span_deg": s.trajectory.span_deg, "num_positions": s.trajectory.num_positions, "aim": aim},
        "window": {
            "kind": s.window.kind.value,
            "reference": None if s.window.reference is None else list(s.window.reference),
            "symmetry": s.window.symmetry,
            "sigma_scale": s.window.sigma_scale,
        },
        "propagation": {"synthesis": s.synthesis, "filter": s.filter},
        "snr_db": "none" if s.snr_db is None else s.snr_db,
        "seed": s.seed,
        "grid": {"origin": list(s.grid.origin), "dx": s.grid.dx, "dy": s.grid.dy, "nx": s.grid.nx, "ny": s.grid.ny},
        "subregions": {"gx": s.subregions[0], "gy": s.subregions[1]},
        "cut": {"kind": s.cut.kind, "half_length_m": s.cut.half_length, "samples": s.cut.samples},
        "options": {
            "constant_phase": s.constant_phase,
            "direct_path": s.direct_path,
            "spreading": s.spreading,
        },
    }


def serialize_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2) + "\n"


def _merge(base, extra):
    if not isinstance(base, dict) or not isinstance(extra, dict):
        return copy.deepcopy(extra)
    out = copy.deepcopy(base)
    for key, value in extra.items():
        out[key] = _merge(out[key], value) if isinstance(out.get(key), dict) else copy.deepcopy(value)
    return out


def canned_names() -> list[str]:
    files = resources.files(__package__).joinpath("scenarios").iterdir()
    return sorted(f.name[:-5] for f in files if f.name.endswith(".json"))


def load_canned(name: str) -> str:
    path = resources.files(__package__).joinpath("scenarios", f"{name}.json")
    if not path.is_file():
        raise ScenarioError("", f"no canned scenario named {name!r}")
    return path.read_text(encoding="utf-8")

"""Scenario files: one JSON document describing a perimeter, agents and run settings.

Example::

    {
      "version": 1,
      "perimeter": {"shape": "circle", "radius": 1.0, "n": 2048},
      "nu": 0.5,
      "defenders": [0.0],
      "intruders": [[0.0, 2.0]],
      "policies": {"defender": "mm", "intruder": "greedy-team"},
      "sim": {"dt": null, "t_max": null, "capture_eps": null, "reassign_period": 10, "seed": 0},
      "outputs": {"dir": "out", "svg": false}
    }

Unset (null) sim lengths default to multiples of the perimeter length L.
Validation errors name the offending field, e.g. ``nu: must lie in (0,1]``.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .geometry import GeometryError, PerimeterCurve, is_exterior, perimeter_from_spec
from .sim import DEFENDER_POLICIES, INTRUDER_POLICIES, SimConfig

SCHEMA_VERSION = 1
SHAPES = ("circle", "piecewise-ellipse")
SIM_KEYS = ("dt", "t_max", "capture_eps", "reassign_period", "seed", "hysteresis", "dwin_margin",
            "record_every")


class ScenarioError(ValueError):
    """Raised with a ``field: reason`` message."""


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ScenarioError(f"{where}: must be finite")
    return float(value)


def _point(value, where: str) -> list[float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ScenarioError(f"{where}: expected [x, y]")
    return [_number(value[0], f"{where}[0]"), _number(value[1], f"{where}[1]")]


def _check_perimeter(spec) -> dict:
    if not isinstance(spec, dict):
        raise ScenarioError("perimeter: expected an object")
    out = copy.deepcopy(spec)
    if "vertices" in spec:
        verts = spec["vertices"]
        if not isinstance(verts, list) or len(verts) < 3:
            raise ScenarioError("perimeter.vertices: need at least 3 points")
        out["vertices"] = [_point(p, f"perimeter.vertices[{i}]") for i, p in enumerate(verts)]
        return out
    shape = spec.get("shape")
    if shape not in SHAPES:
        raise ScenarioError(f"perimeter.shape: expected one of {list(SHAPES)} or a 'vertices' list, got {shape!r}")
    if "n" in spec:
        n = spec["n"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 3:
            raise ScenarioError("perimeter.n: densification must be an integer >= 3")
    if shape == "circle" and "radius" in spec:
        if _number(spec["radius"], "perimeter.radius") <= 0:
            raise ScenarioError("perimeter.radius: must be positive")
    if shape == "piecewise-ellipse" and "axes" in spec:
        axes = spec["axes"]
        if not isinstance(axes, list) or len(axes) != 4:
            raise ScenarioError("perimeter.axes: expected four [a, b] pairs")
        for q, ab in enumerate(axes):
            a, b = _point(ab, f"perimeter.axes[{q}]")
            if a <= 0 or b <= 0:
                raise ScenarioError(f"perimeter.axes[{q}]: semi-axes must be positive")
    return out


@dataclass
class Scenario:
    perimeter: dict
    nu: float
    defenders: list = field(default_factory=list)
    intruders: list = field(default_factory=list)
    defender_policy: str = "mm"
    intruder_policy: str = "greedy-team"
    sim: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)  # montecarlo / oracle blocks, passed through
    version: int = SCHEMA_VERSION

    _curve: PerimeterCurve | None = field(default=None, init=False, repr=False, compare=False)

    def curve(self) -> PerimeterCurve:
        if self._curve is None:
            try:
                self._curve = perimeter_from_spec(self.perimeter)
            except GeometryError as exc:
                raise ScenarioError(f"perimeter: {exc}") from exc
        return self._curve

    # --- (de)serialization -----------------------------------------------------

    @classmethod
    def from_dict(cls, doc: dict, check_geometry: bool = True) -> "Scenario":
        if not isinstance(doc, dict):
            raise ScenarioError("scenario: expected a JSON object")
        version = doc.get("version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ScenarioError(f"version: unsupported schema version {version!r}")
        if "perimeter" not in doc:
            raise ScenarioError("perimeter: missing")
        perimeter = _check_perimeter(doc["perimeter"])
        if "nu" not in doc:
            raise ScenarioError("nu: missing")
        nu = _number(doc["nu"], "nu")
        if not 0.0 < nu <= 1.0:
            raise ScenarioError(f"nu: must lie in (0,1], got {nu}")
        defenders = doc.get("defenders", [])
        if not isinstance(defenders, list):
            raise ScenarioError("defenders: expected a list of arc positions")
        defenders = [_number(s, f"defenders[{i}]") for i, s in enumerate(defenders)]
        intruders = doc.get("intruders", [])
        if not isinstance(intruders, list):
            raise ScenarioError("intruders: expected a list of [x, y] points")
        intruders = [_point(x, f"intruders[{k}]") for k, x in enumerate(intruders)]
        pol = doc.get("policies", {}) or {}
        if not isinstance(pol, dict):
            raise ScenarioError("policies: expected an object")
        dpol = pol.get("defender", "mm")
        ipol = pol.get("intruder", "greedy-team")
        if dpol not in DEFENDER_POLICIES:
            raise ScenarioError(f"policies.defender: unknown policy {dpol!r}")
        if ipol not in INTRUDER_POLICIES:
            raise ScenarioError(f"policies.intruder: unknown policy {ipol!r}")
        sim = dict(doc.get("sim", {}) or {})
        for key in sim:
            if key not in SIM_KEYS:
                raise ScenarioError(f"sim.{key}: unknown setting")
        for key in ("dt", "t_max", "capture_eps", "hysteresis", "dwin_margin"):
            if sim.get(key) is not None:
                v = _number(sim[key], f"sim.{key}")
                if key in ("dt", "capture_eps") and v <= 0:
                    raise ScenarioError(f"sim.{key}: must be positive")
                if v < 0:
                    raise ScenarioError(f"sim.{key}: must be non-negative")
        for key in ("reassign_period", "seed", "record_every"):
            if key in sim:
                v = sim[key]
                if isinstance(v, bool) or not isinstance(v, int) or v < (0 if key == "seed" else 1):
                    raise ScenarioError(f"sim.{key}: expected a {'non-negative' if key == 'seed' else 'positive'} integer")
        outputs = dict(doc.get("outputs", {}) or {})
        extra = {k: copy.deepcopy(v) for k, v in doc.items()
                 if k not in ("version", "perimeter", "nu", "defenders", "intruders", "policies", "sim", "outputs")}
        sc = cls(perimeter, nu, defenders, intruders, dpol, ipol, sim, outputs, extra, version)
        if check_geometry:
            sc.check_geometry()
        return sc

    def check_geometry(self) -> None:
        c = self.curve()
        L = c.total_length
        for i, s in enumerate(self.defenders):
            if not 0.0 <= s < L:
                raise ScenarioError(f"defenders[{i}]: arc position must lie in [0, L) with L = {L:.6g}, got {s}")
        for k, x in enumerate(self.intruders):
            if not is_exterior(c, x):
                raise ScenarioError(f"intruders[{k}]: point {x} is not exterior to the perimeter")

    def to_dict(self) -> dict:
        doc = {
            "version": self.version,
            "perimeter": copy.deepcopy(self.perimeter),
            "nu": self.nu,
            "defenders": list(self.defenders),
            "intruders": [list(x) for x in self.intruders],
            "policies": {"defender": self.defender_policy, "intruder": self.intruder_policy},
            "sim": dict(self.sim),
            "outputs": dict(self.outputs),
        }
        doc.update(copy.deepcopy(self.extra))
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def save(self, path) -> None:
        Path(path).write_text(self.dumps() + "\n")

    # --- conversions -------------------------------------------------------------

    def with_overrides(self, dt=None, t_max=None, eps=None, seed=None) -> "Scenario":
        sc = Scenario.from_dict(self.to_dict(), check_geometry=False)
        sc._curve = self._curve
        for key, v in (("dt", dt), ("t_max", t_max), ("capture_eps", eps), ("seed", seed)):
            if v is not None:
                sc.sim[key] = v
        return sc

    def sim_config(self) -> SimConfig:
        s = self.sim
        return SimConfig(
            self.curve(), self.nu, list(self.defenders), [list(x) for x in self.intruders],
            defender_policy=self.defender_policy, intruder_policy=self.intruder_policy,
            dt=s.get("dt"), t_max=s.get("t_max"), capture_eps=s.get("capture_eps"),
            reassign_period=int(s.get("reassign_period", 10)), seed=int(s.get("seed", 0)),
            hysteresis=s.get("hysteresis"), dwin_margin=s.get("dwin_margin"),
            record_every=int(s.get("record_every", 1)),
        )


def loads(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario: invalid JSON ({exc})") from exc
    return Scenario.from_dict(doc)


def load(path) -> Scenario:
    return loads(Path(path).read_text())


__all__ = ["SCHEMA_VERSION", "Scenario", "ScenarioError", "load", "loads"]

"""Agent/scenario types, admissibility validation, and scenario file I/O.

A scenario is a YAML document whose keys mirror the dataclass fields below.
Targets are first-class agents with zero control authority so the relative
geometry code stays uniform for every pair.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Iterable

import yaml

from .vecmath import Vec3, is_finite, norm

EFFECTOR = "effector"
TARGET = "target"


@dataclass(frozen=True, slots=True)
class AgentState:
    """Position/velocity pair of one agent (SI units)."""

    position: Vec3
    velocity: Vec3


@dataclass(frozen=True, slots=True)
class PhysicalBounds:
    v_max: float
    u_max: float


@dataclass(frozen=True, slots=True)
class AgentSpec:
    id: int
    role: str
    initial: AgentState
    bounds: PhysicalBounds
    assigned_target: int | None = None


@dataclass(frozen=True, slots=True)
class GuidanceParams:
    nav_constant: float = 4.0


@dataclass(frozen=True, slots=True)
class SafetyParams:
    r_s: float = 300.0
    r_crit: float = 1500.0
    r_neigh: float = 5000.0
    eta: float = 0.5
    alpha_gain: float = 1.0
    a_max_fraction: float = 0.9


@dataclass(frozen=True, slots=True)
class WeightParams:
    w_0: float = 1.0
    k_d: float = 100.0
    k_t: float = 100.0
    epsilon: float = 1e-3


@dataclass(frozen=True, slots=True)
class SimParams:
    dt: float = 0.005
    t_end: float = 60.0
    r_hit: float = 5.0
    r_collision: float = 2.0
    filter_enabled: bool = True
    cooperative_links: bool = True


@dataclass(frozen=True, slots=True)
class SlackParams:
    regularization: float = 1e-6


@dataclass(frozen=True, slots=True)
class ScenarioConfig:
    agents: tuple[AgentSpec, ...]
    guidance: GuidanceParams = field(default_factory=GuidanceParams)
    safety: SafetyParams = field(default_factory=SafetyParams)
    weights: WeightParams = field(default_factory=WeightParams)
    sim: SimParams = field(default_factory=SimParams)
    slack: SlackParams = field(default_factory=SlackParams)
    name: str = "scenario"

    def effectors(self) -> tuple[AgentSpec, ...]:
        return tuple(a for a in self.agents if a.role == EFFECTOR)

    def targets(self) -> tuple[AgentSpec, ...]:
        return tuple(a for a in self.agents if a.role == TARGET)

    def agent(self, agent_id: int) -> AgentSpec:
        for a in self.agents:
            if a.id == agent_id:
                return a
        raise KeyError(f"no agent with id {agent_id}")


def pair_feasibility_threshold(a: PhysicalBounds, b: PhysicalBounds) -> float:
    """Smallest admissible safety distance for a pair of effectors.

    The shared bounds of a pair are the faster speed limit and the weaker
    control authority; the braking argument behind the barrier needs both
    agents to supply the assumed deceleration.
    """
    v = max(a.v_max, b.v_max)
    u = min(a.u_max, b.u_max)
    if u <= 0.0:
        return math.inf
    return v * v / u


def validate_scenario(cfg: ScenarioConfig) -> list[str]:
    """Return every violated admissibility rule (empty list iff valid)."""
    problems: list[str] = []
    s = cfg.safety

    if not (0.0 < s.eta < 1.0):
        problems.append(f"eta must lie in (0, 1), got {s.eta}")
    if s.r_s <= 0.0:
        problems.append(f"r_s must be positive, got {s.r_s}")
    if not (s.r_s < s.eta * s.r_crit):
        problems.append(
            f"safety ordering violated: r_s={s.r_s} must be < eta*r_crit={s.eta * s.r_crit}"
        )
    if not (s.r_crit <= s.r_neigh):
        problems.append(
            f"safety ordering violated: r_crit={s.r_crit} must be <= r_neigh={s.r_neigh}"
        )
    if not (0.0 < s.a_max_fraction <= 1.0):
        problems.append(f"a_max_fraction must lie in (0, 1], got {s.a_max_fraction}")
    if cfg.sim.dt <= 0.0:
        problems.append(f"dt must be positive, got {cfg.sim.dt}")
    if cfg.sim.t_end <= 0.0:
        problems.append(f"t_end must be positive, got {cfg.sim.t_end}")
    if cfg.guidance.nav_constant <= 0.0:
        problems.append(f"nav_constant must be positive, got {cfg.guidance.nav_constant}")
    w = cfg.weights
    if w.w_0 <= 0.0:
        problems.append(f"w_0 must be positive, got {w.w_0}")
    if w.k_d < 0.0 or w.k_t < 0.0:
        problems.append(f"k_d and k_t must be non-negative, got {w.k_d}, {w.k_t}")
    if w.epsilon <= 0.0:
        problems.append(f"epsilon must be positive, got {w.epsilon}")
    if cfg.slack.regularization <= 0.0:
        problems.append(f"slack regularization must be positive, got {cfg.slack.regularization}")

    seen: set[int] = set()
    ids = {a.id for a in cfg.agents}
    for a in cfg.agents:
        if a.id in seen:
            problems.append(f"duplicate agent id {a.id}")
        seen.add(a.id)
        if a.role not in (EFFECTOR, TARGET):
            problems.append(f"agent {a.id}: unknown role {a.role!r}")
            continue
        if not (is_finite(a.initial.position) and is_finite(a.initial.velocity)):
            problems.append(f"agent {a.id}: non-finite initial state")
        if a.bounds.v_max <= 0.0:
            problems.append(f"agent {a.id}: v_max must be positive, got {a.bounds.v_max}")
        if a.role == EFFECTOR:
            if a.bounds.u_max <= 0.0:
                problems.append(f"agent {a.id}: effector u_max must be positive, got {a.bounds.u_max}")
            if a.assigned_target is None:
                problems.append(f"agent {a.id}: effector has no assigned target")
            elif a.assigned_target not in ids:
                problems.append(f"agent {a.id}: assigned target {a.assigned_target} does not exist")
            elif cfg.agent(a.assigned_target).role != TARGET:
                problems.append(f"agent {a.id}: assigned target {a.assigned_target} is not a target")
        else:
            if a.bounds.u_max != 0.0:
                problems.append(f"agent {a.id}: target u_max must be 0, got {a.bounds.u_max}")

    effectors = cfg.effectors()
    for i, ea in enumerate(effectors):
        for eb in effectors[i + 1 :]:
            threshold = pair_feasibility_threshold(ea.bounds, eb.bounds)
            if not (s.r_s > threshold):
                problems.append(
                    f"infeasible safety distance for effector pair ({ea.id}, {eb.id}): "
                    f"r_s={s.r_s} must exceed v_max^2/u_max={threshold}"
                )
    return problems


# --- serialization -----------------------------------------------------------


def _vec_to_list(v: Vec3) -> list[float]:
    return [v[0], v[1], v[2]]


def _vec_from(obj: Any) -> Vec3:
    if not isinstance(obj, (list, tuple)) or len(obj) != 3:
        raise ValueError(f"expected a 3-element vector, got {obj!r}")
    return (float(obj[0]), float(obj[1]), float(obj[2]))


def scenario_to_dict(cfg: ScenarioConfig) -> dict[str, Any]:
    return {
        "name": cfg.name,
        "guidance": dataclasses.asdict(cfg.guidance),
        "safety": dataclasses.asdict(cfg.safety),
        "weights": dataclasses.asdict(cfg.weights),
        "sim": dataclasses.asdict(cfg.sim),
        "slack": dataclasses.asdict(cfg.slack),
        "agents": [
            {
                "id": a.id,
                "role": a.role,
                "initial": {
                    "position": _vec_to_list(a.initial.position),
                    "velocity": _vec_to_list(a.initial.velocity),
                },
                "bounds": {"v_max": a.bounds.v_max, "u_max": a.bounds.u_max},
                **({"assigned_target": a.assigned_target} if a.assigned_target is not None else {}),
            }
            for a in cfg.agents
        ],
    }


def _group(cls, data: dict[str, Any] | None, where: str):
    data = dict(data or {})
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ValueError(f"unknown keys {sorted(unknown)} in {where}")
    return cls(**data)


def scenario_from_dict(data: dict[str, Any], name: str = "scenario") -> ScenarioConfig:
    agents: list[AgentSpec] = []
    for raw in data.get("agents", []):
        initial = AgentState(
            position=_vec_from(raw["initial"]["position"]),
            velocity=_vec_from(raw["initial"]["velocity"]),
        )
        role = str(raw["role"])
        if "bounds" in raw:
            bounds = PhysicalBounds(
                v_max=float(raw["bounds"]["v_max"]), u_max=float(raw["bounds"]["u_max"])
            )
        elif role == TARGET:
            # Non-accelerating targets hold their launch speed.
            bounds = PhysicalBounds(v_max=norm(initial.velocity), u_max=0.0)
        else:
            raise ValueError(f"agent {raw.get('id')}: effector needs explicit bounds")
        agents.append(
            AgentSpec(
                id=int(raw["id"]),
                role=role,
                initial=initial,
                bounds=bounds,
                assigned_target=(
                    int(raw["assigned_target"]) if raw.get("assigned_target") is not None else None
                ),
            )
        )
    return ScenarioConfig(
        agents=tuple(agents),
        guidance=_group(GuidanceParams, data.get("guidance"), "guidance"),
        safety=_group(SafetyParams, data.get("safety"), "safety"),
        weights=_group(WeightParams, data.get("weights"), "weights"),
        sim=_group(SimParams, data.get("sim"), "sim"),
        slack=_group(SlackParams, data.get("slack"), "slack"),
        name=str(data.get("name", name)),
    )


def dump_scenario(cfg: ScenarioConfig) -> str:
    return yaml.safe_dump(scenario_to_dict(cfg), sort_keys=False)


def parse_scenario(text: str, name: str = "scenario") -> ScenarioConfig:
    data = yaml.safe_load(text)
    if not isinstance(data, dict):
        raise ValueError("scenario document must be a mapping")
    return scenario_from_dict(data, name=name)


def load_scenario(source: str | Path) -> ScenarioConfig:
    """Load a scenario from a file path or a bundled scenario name."""
    path = Path(source)
    if not path.exists():
        bundled = resources.files("rcbf_swarm.scenarios").joinpath(f"{source}.yaml")
        if bundled.is_file():
            return parse_scenario(bundled.read_text(), name=str(source))
        raise FileNotFoundError(f"scenario {source!r} is neither a file nor a bundled scenario")
    return parse_scenario(path.read_text(), name=path.stem)


def save_scenario(cfg: ScenarioConfig, path: str | Path) -> None:
    Path(path).write_text(dump_scenario(cfg))


def apply_overrides(cfg: ScenarioConfig, overrides: Iterable[str]) -> ScenarioConfig:
    """Apply ``group.key=value`` overrides to the scalar config groups."""
    data = scenario_to_dict(cfg)
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"override {item!r} is not of the form key=value")
        parts = key.strip().split(".")
        node: Any = data
        for part in parts[:-1]:
            if not isinstance(node, dict) or part not in node:
                raise ValueError(f"unknown override key {key!r}")
            node = node[part]
        leaf = parts[-1]
        if not isinstance(node, dict) or leaf not in node:
            raise ValueError(f"unknown override key {key!r}")
        node[leaf] = _coerce_like(node[leaf], value.strip(), key)
    return scenario_from_dict(data, name=cfg.name)


def _coerce_like(current: Any, value: str, key: str) -> Any:
    if isinstance(current, bool):
        lowered = value.lower()
        if lowered in ("true", "on", "1", "yes"):
            return True
        if lowered in ("false", "off", "0", "no"):
            return False
        raise ValueError(f"override {key!r}: expected a boolean, got {value!r}")
    if isinstance(current, int) and not isinstance(current, bool):
        return int(value)
    if isinstance(current, float):
        return float(value)
    if isinstance(current, str):
        return value
    raise ValueError(f"override {key!r} targets a non-scalar value")

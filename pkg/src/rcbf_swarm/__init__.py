"""Decentralized robust-CBF safety filtering for cooperative interceptor swarms."""

from .barrier import (
    BarrierEval,
    InfeasibleSafetyMarginError,
    SafetyConstraint,
    barrier_eval,
    constraint_row,
    rcbf_a_max,
)
from .core import (
    EFFECTOR,
    TARGET,
    AgentSpec,
    AgentState,
    PhysicalBounds,
    ScenarioConfig,
    apply_overrides,
    load_scenario,
    save_scenario,
    validate_scenario,
)
from .engine import SimEvent, TrajectoryLog, integrate_step, run
from .geometry import PairGeometry, neighbors, pair_geometry, trigger
from .guidance import DegenerateRangeError, GuidanceCommand, png_command
from .qp import (
    QpInfeasibleError,
    QpIterationLimitError,
    QpProblem,
    QpRow,
    QpSolution,
    solve,
    verify_kkt,
)
from .safety_filter import FilterDiagnostics, criticality_weight, filter_step, scenario_a_max
from .vecmath import Vec3

__version__ = "0.1.0"

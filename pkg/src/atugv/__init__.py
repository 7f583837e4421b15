"""Motion planning and simulation for affine-transformable multi-cell
ground vehicles."""

from .affine import (
    AffineTransform,
    GeneralizedCoordinates,
    RotationStrain,
    apply,
    decompose,
    jacobian,
    rotation_matrix,
    strain_matrix,
)
from .errors import (
    AtugvError,
    DecompositionError,
    DegreeViolationError,
    DomainError,
    InconsistentAnglesError,
    InvalidArgumentError,
    LayeringViolationError,
    ReferenceOverlapError,
    ScenarioError,
    UnreachableSeparationError,
    UnsafePlanError,
)
from .kinematics import (
    desired_elbow_angles,
    elbow_angle,
    resolve_unpowered_position,
    separation_from_angle,
)
from .network import (
    CellGraph,
    LayeredNetwork,
    ReferenceConfiguration,
    build_layered_network,
    closest_pair,
    min_separation,
    solve_reference_positions,
)
from .planner import PlannedTrajectory, PlanSpec, blend, coordinates_at, plan
from .safety import (
    ClearanceReport,
    SafetyBound,
    SafetyVerdict,
    lambda_min,
    validate_coordinates,
    verify_pairwise_clearance,
)
from .scenario import Scenario, bundled_scenario_path, load_scenario, load_scenario_text
from .simulator import SimConfig, SimState, SimulationTrace, run, step, velocity_command

__version__ = "0.1.0"

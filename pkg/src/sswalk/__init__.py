"""Split-step discrete quantum walk simulator.

Maps diagonal (1+1) metrics, U(1)/U(N) gauge potentials and mass onto
position- and time-dependent coin parameters, evolves single- and
two-walker states, and verifies the closed-form first-order generator
against the numeric one.
"""

from .coins import (
    CoinField,
    LinearOperator,
    RestrictedCoinField,
    build_coin,
    build_coin_restricted,
    build_shift,
)
from .evolution import StepBuilder, Trajectory, conventional_step, evolve, modified_step
from .geometry import (
    Embedding2p1,
    MetricSpec,
    coin_to_metric,
    dirac_hamiltonian_1p1,
    dispersion,
    embed_2p1,
    flat_metric,
    light_cone_boundary,
    metric_to_coin,
    monotonicity_check,
    nonstatic_trig_metric,
    rindler_like_metric,
)
from .hamiltonian import (
    HamiltonianCoefficients,
    assemble,
    coefficients_general,
    coefficients_restricted,
    convergence_order,
    momentum_operator,
    numeric_generator,
)
from .lattice import (
    Lattice,
    MomentumGrid,
    WalkState,
    initial_state,
    make_lattice,
    momentum_values,
    probability_profile,
)
from .scenarios import ScenarioSpec, builtin_scenario, load_config, run_scenario
from .verify import run_verification_suite

__version__ = "0.1.0"

__all__ = [
    "CoinField",
    "Embedding2p1",
    "HamiltonianCoefficients",
    "Lattice",
    "LinearOperator",
    "MetricSpec",
    "MomentumGrid",
    "RestrictedCoinField",
    "ScenarioSpec",
    "StepBuilder",
    "Trajectory",
    "WalkState",
    "assemble",
    "build_coin",
    "build_coin_restricted",
    "build_shift",
    "builtin_scenario",
    "coefficients_general",
    "coefficients_restricted",
    "coin_to_metric",
    "conventional_step",
    "convergence_order",
    "dirac_hamiltonian_1p1",
    "dispersion",
    "embed_2p1",
    "evolve",
    "flat_metric",
    "initial_state",
    "light_cone_boundary",
    "load_config",
    "make_lattice",
    "metric_to_coin",
    "modified_step",
    "momentum_operator",
    "momentum_values",
    "monotonicity_check",
    "nonstatic_trig_metric",
    "numeric_generator",
    "probability_profile",
    "rindler_like_metric",
    "run_scenario",
    "run_verification_suite",
]

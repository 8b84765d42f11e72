"""Giant atoms coupled to a 1D waveguide at multiple points.

Builds the geometry-dependent master equation for small-N multi-point
emitters, computes dressed states and transition rates, propagates the
dynamics, and evaluates entanglement (concurrence) and emitted-photon
statistics (g2, Mandel Q), with an independent cascaded-network oracle for
the master equation.
"""

from .errors import (
    ConfigError,
    DarkStateError,
    DegeneracyError,
    ExportError,
    IntegrationAccuracyError,
    ModelConstructionError,
    PhysicsError,
)
from .layout import AtomLayout, AtomSpec, CouplingSet, coupling_set, make_layout
from .liouvillian import (
    DriveSpec,
    LindbladModel,
    apply_liouvillian,
    bell_state,
    build_model,
    check_density_matrix,
    ket,
    lowering_operators,
    pure_density,
    superoperator,
    unvec,
    vec,
)
from .spectral import (
    DressedPair,
    RateQuartet,
    dressed_states,
    drive_couplings,
    extract_rate,
    liouvillian_spectrum,
    transition_rates,
)
from .evolve import SteadyState, Trajectory, decompose, propagate, steady_state
from .observables import (
    CorrelationCurve,
    FieldAmplitudes,
    concurrence,
    field_amplitudes,
    g2_tau,
    g2_zero,
    intensity,
    mandel_q,
)
from .slh import (
    SLHTriplet,
    build_network,
    concatenate,
    identity_triplet,
    phase_element,
    series_product,
    to_lindblad,
)
from .config import ScenarioConfig, load_config, save_config
from .runner import SweepResult, Table, run_scenario, sweep, write_tables

__version__ = "0.1.0"

"""Nullcline geometry and bifurcation localization for planar predator-prey models."""

from .dynamics import (
    OscillationVerdict,
    Trajectory,
    classify_orbit,
    confirm_bifurcation,
    integrate_flow,
    iterate_map,
)
from .equilibria import Equilibrium, find_coexistence_equilibria, predator_nullcline_y
from .harness import SweepConfig, SweepReport, duality_report, run_sweep
from .loci import (
    BifurcationPoint,
    LocalizationVerdict,
    bazykin_hopf,
    cm_hopf_x,
    crowley_martin_c0,
    crowley_martin_hopf,
    holling4_bt,
    holling4_hopf_branch,
    holling4_hopf_window,
    hopf_points_at,
    hopf_transversality,
    ns_locus,
    ns_points_at,
)
from .models import Family, ModelInstance, ParameterSet, PlanarState, jacobian, validate_parameters, vector_field
from .nullcline import CriticalPoint, NullclineProfile, branch_of, critical_points, nullcline_profile, nullcline_value
from .spectral import RigidityReport, SpectralSummary, rigidity_report, spectral_summary, trace_on_nullcline

__version__ = "0.1.0"

"""Resonant oscillators, regularized Kummer shapes and Lie-Poisson reduction."""
from .errors import DimensionError, DomainError, GroupMembershipError, KummerError, SignatureError
from .integrate import IntegratorConfig, Trajectory, integrate, monitor
from .lie_algebra import LieAlgebra, make_su_1_1, make_su_d
from .momentum import MomentumMapSpec, algebra_for, j_resonant, j_unit
from .phase_space import ScalarField, poisson_bracket
from .reduction import DualFunction, lie_poisson_bracket, lie_poisson_field
from .resonance import ResonanceSignature, f_map, r_invariant
from .verify import run_suite

__version__ = "0.1.0"

"""Bounded synthesis of supervisors that resist actuator enablement attacks."""

from .attack import AttackConstraint, MooreAttacker, compose, damage_reachable
from .automata import Fsa, check_language_inclusion, sync_product
from .instance import SynthesisInstance
from .io import parse_instance, serialize_instance
from .sat import BACKEND, SolverConfig
from .solve import bound_schedule, find_attacker, synthesize_cegis, synthesize_direct
from .supervision import ControlConstraint, check_range_control, validate_supervisor

__version__ = "0.1.0"

__all__ = [
    "AttackConstraint", "BACKEND", "ControlConstraint", "Fsa", "MooreAttacker", "SolverConfig",
    "SynthesisInstance", "bound_schedule", "check_language_inclusion", "check_range_control", "compose",
    "damage_reachable", "find_attacker", "parse_instance", "serialize_instance", "sync_product",
    "synthesize_cegis", "synthesize_direct", "validate_supervisor",
]

"""Fixed-parameter pipeline for weighted MinCSP over {<, =, !=}."""
from .boolean import brute_force_boolean, solve_boolean_mincsp, two_sat_satisfiable
from .compression import compress_step, compression_driver, enumerate_weak_orders, solve
from .encoding import (BooleanConstraint, BooleanInstance, BooleanVarId, CompressedInstance,
                       Encoding, LiftError, booleanize, check_bijunctive_2k2_free,
                       dump_boolean_instance, lift_solution)

__all__ = [
    "BooleanConstraint", "BooleanInstance", "BooleanVarId", "CompressedInstance", "Encoding",
    "LiftError", "booleanize", "brute_force_boolean", "check_bijunctive_2k2_free",
    "compress_step", "compression_driver", "dump_boolean_instance", "enumerate_weak_orders",
    "lift_solution", "solve", "solve_boolean_mincsp", "two_sat_satisfiable",
]

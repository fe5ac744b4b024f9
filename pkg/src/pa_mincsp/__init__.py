"""Minimum-deletion solving for Point Algebra constraints (<, <=, =, !=)."""
from .model import (EQ, INF, LEQ, LT, NEQ, Constraint, FormatError, GuardExceeded, Instance,
                    LanguageClass, Relation, Report, Solution, classify_language, evaluate,
                    make_instance, normalize, parse_instance, serialize_instance)
from .satisfiability import check_satisfiable, drop_disequalities, trivial_solve

__version__ = "0.1.0"

__all__ = [
    "EQ", "INF", "LEQ", "LT", "NEQ", "Constraint", "FormatError", "GuardExceeded", "Instance",
    "LanguageClass", "Relation", "Report", "Solution", "check_satisfiable", "classify_language",
    "drop_disequalities", "evaluate", "make_instance", "normalize", "parse_instance",
    "serialize_instance", "trivial_solve",
]

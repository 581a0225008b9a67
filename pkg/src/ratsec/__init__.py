"""Regular languages over group generators: cross-sections, positive cones,
crossing numbers in Houghton's group and section calculus in the Grigorchuk
group, with enumeration-based checks."""

from .automata import Automaton, automaton, build_from_regex, determinize, trim
from .errors import (
    CapacityError,
    DomainError,
    PreconditionError,
    RatsecError,
    RegexSyntaxError,
    SchemaError,
)
from .groups import Group, parse_group
from .orders import Cone, build_cone

__version__ = "0.1.0"

__all__ = [
    "Automaton",
    "CapacityError",
    "Cone",
    "DomainError",
    "Group",
    "PreconditionError",
    "RatsecError",
    "RegexSyntaxError",
    "SchemaError",
    "automaton",
    "build_cone",
    "build_from_regex",
    "determinize",
    "parse_group",
    "trim",
]

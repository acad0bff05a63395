"""Integral quickest transshipment over time.

Feasibility through submodular minimization of the violation function,
tight chains refined by strong-map parametric searches, and flow
extraction checked against a time-expanded network.
"""

from .model import (
    SINK,
    SOURCE,
    U_INF,
    Arc,
    ContractError,
    DynamicNetwork,
    InstanceFormatError,
    TerminalSet,
    TransshipmentInstance,
    example_i1,
    load_instance,
    save_instance,
    validate,
)
from .outflow import OutflowOracle, max_outflow, violation
from .sfm import is_feasible, minimize
from .pipeline import lift, refine, tight_order
from .lexmax import lex_max_transshipment, project
from .generate import min_horizon, random_instance

__version__ = "0.1.0"

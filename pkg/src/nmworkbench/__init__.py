"""Workbench for defeasible inheritance, preferential structures and
higher order attack structures."""

from .choicefn import ChoiceFunction, check, prop
from .errors import ParseError, PreconditionFailed, WorkbenchError
from .inference import Mode, Verdict, all_conclusions, conclude, extensions, valid_paths
from .io import export_dot, load, parse, serialize
from .netcore import Diagram, neg, pos, validate_diagram

__version__ = "0.1.0"

__all__ = [
    "ChoiceFunction", "Diagram", "Mode", "ParseError", "PreconditionFailed", "Verdict",
    "WorkbenchError", "all_conclusions", "check", "conclude", "export_dot", "extensions",
    "load", "neg", "parse", "pos", "prop", "serialize", "valid_paths", "validate_diagram",
]

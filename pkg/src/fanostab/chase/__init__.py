"""Diagram chases over long exact cohomology sequences."""
from .checker import CheckReport, TraceError, check_trace
from .engine import SES, ChaseContradiction, ChaseState, Registry, RuleError, Space
from .expr import Group, Sheaf, parse_group, parse_sheaf
from .script import (
    ChaseResult,
    ProofTrace,
    Script,
    ScriptError,
    StoreSource,
    WeylSource,
    load_bearing_inputs,
    parse_script,
    replay,
)

__all__ = [
    "SES", "ChaseContradiction", "ChaseResult", "ChaseState", "CheckReport", "Group",
    "ProofTrace", "Registry", "RuleError", "Script", "ScriptError", "Sheaf", "Space",
    "StoreSource", "TraceError", "WeylSource", "check_trace", "load_bearing_inputs",
    "parse_group", "parse_script", "parse_sheaf", "replay",
]

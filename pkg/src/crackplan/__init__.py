"""Rule-order planning for forensic password cracking."""

from ._backend import BACKEND
from .ruledsl import (
    RuleCatalog,
    RulePattern,
    builtin_custom,
    builtin_prtk_default,
    compile,
    format_rule,
    load_catalog,
    load_preset,
    matches,
    parse_rule,
    save_catalog,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "RuleCatalog", "RulePattern", "builtin_custom", "builtin_prtk_default", "compile",
    "format_rule", "load_catalog", "load_preset", "matches", "parse_rule", "save_catalog",
]

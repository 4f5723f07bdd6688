"""Intent-driven networking toolkit.

Thin wrapper over the C++ extension module: intent parsing and canonical
rendering, ontology validation, plan compilation, content-reference
classification, scenario execution, and audit scoring.
"""

try:
    # installed layout: the extension lives inside this package
    from ._maat import (  # noqa: F401
        classify,
        compile,
        parse,
        render,
        run_scenario,
        score_log,
        validate,
    )
except ImportError:
    # development layout: the extension sits on PYTHONPATH (build tree)
    from _maat import (  # noqa: F401
        classify,
        compile,
        parse,
        render,
        run_scenario,
        score_log,
        validate,
    )

__all__ = [
    "classify",
    "compile",
    "parse",
    "render",
    "run_scenario",
    "score_log",
    "validate",
]

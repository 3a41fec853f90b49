"""Streaming engine and toolkit for the recurrence a(n) = pi(n) - pi(s(n-1)).

The heavy lifting lives in the compiled extension; this package just
re-exports it under a stable name.
"""

try:
    from ._piseq import *  # noqa: F401,F403  (installed layout)
    from ._piseq import __doc__ as _core_doc
except ImportError:  # build-tree layout puts the extension beside the package
    from _piseq import *  # noqa: F401,F403
    from _piseq import __doc__ as _core_doc

__all__ = [
    "Stream",
    "SeqState",
    "InvariantViolation",
    "CapacityError",
    "CheckpointVersionError",
    "CheckpointIntegrityError",
    "generate",
    "census",
    "first_occurrences",
    "progressions",
    "g",
    "pi",
    "certified_digits",
    "shifted",
    "variant",
    "verify",
]

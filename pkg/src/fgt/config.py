"""Process-wide configuration.

The only global knob is ``distinct_triples``: when true (the default),
colour triples with repeated colours are inadmissible for both the
threshold-matching and the collection problems.  Oracles and algorithms
resolve the flag through :func:`resolve_distinct` so that a per-call
override and the global default stay consistent.
"""

from __future__ import annotations

from contextlib import contextmanager

_distinct_triples = True


def get_distinct_triples() -> bool:
    return _distinct_triples


def set_distinct_triples(value: bool) -> None:
    global _distinct_triples
    _distinct_triples = bool(value)


def resolve_distinct(override: bool | None) -> bool:
    """Per-call override if given, else the global default."""
    return _distinct_triples if override is None else bool(override)


@contextmanager
def distinct_triples(value: bool):
    """Temporarily set the global flag (test helper)."""
    global _distinct_triples
    old = _distinct_triples
    _distinct_triples = bool(value)
    try:
        yield
    finally:
        _distinct_triples = old

"""Decimal formatting shared by the reference/model stores and scene manifests."""

from __future__ import annotations

__all__ = ["format_decimal"]


def format_decimal(value: float) -> str:
    """Shortest exact decimal for ``value``, padded to at least six fractional digits.

    ``float(format_decimal(v)) == v`` holds for every finite v; stores rely on it
    for exact round trips.
    """
    text = repr(float(value))
    if "e" in text or "E" in text or "." not in text:
        return text
    head, _, frac = text.partition(".")
    return f"{head}.{frac.ljust(6, '0')}"

"""Tray geometry: key=value layout configs and slot-index to pixel-rectangle math.

Slot indices run left to right within a row, rows top to bottom; that
order fixes the occupancy bitstring everywhere else in the package.
"""

from __future__ import annotations

from dataclasses import astuple, dataclass

from .imaging import Rect

__all__ = ["LAYOUT_KEYS", "TrayLayout", "parse_key_values", "parse_layout", "slot_rect"]

LAYOUT_KEYS = (
    "rows",
    "cols",
    "origin_x",
    "origin_y",
    "pitch_x",
    "pitch_y",
    "slot_w",
    "slot_h",
)


@dataclass(frozen=True)
class TrayLayout:
    """Grid of equally pitched slot rectangles anchored at (origin_x, origin_y)."""

    rows: int
    cols: int
    origin_x: int
    origin_y: int
    pitch_x: int
    pitch_y: int
    slot_w: int
    slot_h: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"rows and cols must be at least 1, got {self.rows}x{self.cols}")
        if self.origin_x < 0 or self.origin_y < 0:
            raise ValueError(f"origin must be non-negative, got ({self.origin_x}, {self.origin_y})")
        if self.pitch_x < 1 or self.pitch_y < 1:
            raise ValueError(f"pitch must be at least 1, got ({self.pitch_x}, {self.pitch_y})")
        if self.slot_w < 1 or self.slot_h < 1:
            raise ValueError(f"slot size must be at least 1x1, got {self.slot_w}x{self.slot_h}")
        if self.slot_w > self.pitch_x:
            raise ValueError(f"slots would overlap: slot_w {self.slot_w} > pitch_x {self.pitch_x}")
        if self.slot_h > self.pitch_y:
            raise ValueError(f"slots would overlap: slot_h {self.slot_h} > pitch_y {self.pitch_y}")

    @property
    def slot_count(self) -> int:
        return self.rows * self.cols

    def fields(self) -> tuple[int, ...]:
        """The eight layout integers in LAYOUT_KEYS order (the calibration fingerprint)."""
        return astuple(self)


def parse_key_values(text: str) -> dict[str, str]:
    """Parse the line-oriented ``key = value`` dialect ('#' comments, LF or CRLF)."""
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ValueError(f"line {lineno}: missing key before '='")
        if key in entries:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = value
    return entries


def parse_layout(text: str) -> TrayLayout:
    """Parse a layout config; all eight keys are required, unknown keys rejected."""
    entries = parse_key_values(text)
    unknown = sorted(set(entries) - set(LAYOUT_KEYS))
    if unknown:
        raise ValueError(f"unknown layout key(s): {', '.join(unknown)}")
    missing = [key for key in LAYOUT_KEYS if key not in entries]
    if missing:
        raise ValueError(f"missing layout key(s): {', '.join(missing)}")
    values = {}
    for key in LAYOUT_KEYS:
        try:
            values[key] = int(entries[key])
        except ValueError:
            raise ValueError(f"layout key {key!r} must be an integer, got {entries[key]!r}") from None
    return TrayLayout(**values)


def slot_rect(layout: TrayLayout, index: int) -> Rect:
    """Pixel rectangle of the 0-based slot ``index`` (row-major scan order)."""
    if not 0 <= index < layout.slot_count:
        raise ValueError(f"slot index {index} out of range 0..{layout.slot_count - 1}")
    row, col = divmod(index, layout.cols)
    return Rect(
        layout.origin_x + col * layout.pitch_x,
        layout.origin_y + row * layout.pitch_y,
        layout.slot_w,
        layout.slot_h,
    )

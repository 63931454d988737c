"""Exact certification of twist conditions on quaternionic covers of staircase origamis."""
from __future__ import annotations

__version__ = "0.1.0"

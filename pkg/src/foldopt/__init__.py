"""Exact-rational linear optimisation over unordered variable sets."""

from __future__ import annotations

__version__ = "0.1.0"

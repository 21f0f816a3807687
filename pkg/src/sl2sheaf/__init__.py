"""Exact computations with restricted sl2-modules and their sheaves on P^1."""
from __future__ import annotations

__version__ = "0.1.0"

"""Exact finite homotopy field theories of Eilenberg-MacLane type and their abelian duality."""
from __future__ import annotations

__version__ = "0.1.0"

"""Exact computation in Thompson's groups F, T, V and V_q(G), with checkable
fixed-point certificates."""

__version__ = "0.1.0"

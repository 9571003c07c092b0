"""Exact computations for baker maps on Chamanara surfaces, their sphere
quotients, toral automorphisms and blow-up inverse limits."""

__version__ = "0.1.0"

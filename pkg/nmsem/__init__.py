"""Nonmonotonic deduction over finite universes: choice functions, qualitative measures, consequence operators and preferential relations."""

__version__ = "0.1.0"

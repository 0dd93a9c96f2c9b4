"""lmlab: exact chart-level models of degenerating quadrics and their blow-ups."""

__version__ = "0.1.0"

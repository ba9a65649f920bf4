"""genuslab: exact invariants of graded modules under parameter ideals."""

__version__ = "0.1.0"

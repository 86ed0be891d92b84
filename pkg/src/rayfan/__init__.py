"""Chamber decompositions, ray ideals and multi-section rings of Z^n-graded rings."""

__version__ = "0.1.0"

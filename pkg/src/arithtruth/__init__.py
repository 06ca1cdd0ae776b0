"""Arithmetized syntax, partial truth predicates, and desk-scale checks over the standard model."""
import sys

if sys.getrecursionlimit() < 10000:
    sys.setrecursionlimit(10000)

__version__ = "0.1.0"

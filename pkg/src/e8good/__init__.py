"""Verification toolkit for good unipotent elements in Chevalley groups of type E8."""

__version__ = "0.1.0"

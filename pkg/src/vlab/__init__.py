"""Desk-scale laboratory for V-logic, set coding, forcing and model relations
over hereditarily finite sets."""

__version__ = "0.1.0"

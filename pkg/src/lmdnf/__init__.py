"""Locally mixing random walks and membership-query DNF learning."""

__version__ = "0.1.0"

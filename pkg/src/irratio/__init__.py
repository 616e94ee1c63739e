"""Determinantal irrationality laboratory."""

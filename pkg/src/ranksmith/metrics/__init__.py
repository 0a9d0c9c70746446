"""Exact retrieval and regression metrics."""

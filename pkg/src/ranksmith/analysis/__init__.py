"""Experiment-level analyses of trained embeddings."""

"""Smooth ranking objectives with analytical gradients."""

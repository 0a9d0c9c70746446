"""Encoders and the loop that trains them against a smooth ranking objective."""

"""Wiring of configuration and shared services."""

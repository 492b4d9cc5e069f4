"""Integration tests for system interactions."""

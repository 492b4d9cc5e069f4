"""Tests for effham."""

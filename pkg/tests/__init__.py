"""Unit tests for the Q-Borel toolkit."""

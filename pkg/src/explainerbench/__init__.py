"""Functional-test benchmark for post-hoc feature-importance explainers."""

__version__ = "0.1.0"

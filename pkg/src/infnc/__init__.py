"""Exact combinatorics of real infinitesimal free probability."""

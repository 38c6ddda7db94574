"""Finite presentations toolkit."""

"""Exact verification toolkit for an arithmetic ball quotient surface."""

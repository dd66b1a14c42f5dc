"""Finitely presented groups: words, coset enumeration, Reidemeister-Schreier, Smith normal form."""

from .presentation import Presentation
from .coset import CosetTable, CosetLimitExceeded, todd_coxeter, orbits, orbit
from . import words
from .cache import cached_todd_coxeter, read_table, write_table

__all__ = [
    "Presentation",
    "CosetTable",
    "CosetLimitExceeded",
    "todd_coxeter",
    "orbits",
    "orbit",
    "words",
    "cached_todd_coxeter",
    "read_table",
    "write_table",
]

"""Braidings on group-theoretical fusion categories, computed exactly from
finite group data."""

__version__ = "0.1.0"

from .catalog import group_by_name, parse_group
from .classify import (classify_center, classify_group_theoretical,
                       classify_pointed, classify_rep, count_gaugings,
                       invertibles_of_center)

__all__ = [
    "__version__", "group_by_name", "parse_group", "classify_center",
    "classify_group_theoretical", "classify_pointed", "classify_rep",
    "count_gaugings", "invertibles_of_center",
]

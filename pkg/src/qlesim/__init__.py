"""Simulation workbench for stable excursions, CSBPs, QLE boundary bookkeeping,
peeling explorations of small triangulations and regularised LQG measures."""
from importlib import metadata as _md

try:
    __version__ = _md.version("qlesim")
except _md.PackageNotFoundError:  # pragma: no cover
    __version__ = "0.0.0"

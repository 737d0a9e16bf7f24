"""Batch figure rendering for su3squeeze CSV data files."""

from .io import DataFile, SchemaError, read_datafile
from .render import render_squeezing_overlay, render_wigner_panels

__version__ = "0.1.0"

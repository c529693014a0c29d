"""Offline figure scripts for solver field files."""

__version__ = "0.1.0"

from .fieldfile import FieldFile, FieldFormatError, load_field_file

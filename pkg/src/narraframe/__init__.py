"""Batch corpus-analysis toolkit for reconstructing partisan narrative frameworks."""

__version__ = "0.1.0"

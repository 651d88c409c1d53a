"""Semantic-role labeling adapter emitting the canonical triple record format."""

__version__ = "0.1.0"

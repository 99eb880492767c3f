"""Ingroup-vs-outgroup index over labeled Spanish tweet corpora."""

__version__ = "0.1.0"

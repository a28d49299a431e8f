"""Valence-pattern extraction and grammar generation for FrameNet corpora."""

__version__ = "0.1.0"

"""Rank medical jargon mined from clinical notes with lexicon-supervised PU learning."""

__version__ = "0.1.0"

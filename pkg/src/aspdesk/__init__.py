"""Editor-agnostic workbench for answer-set programs."""

__version__ = "0.1.0"

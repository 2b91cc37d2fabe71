"""Half-Full/Half-Empty behavioral portfolio selection."""

__version__ = "0.1.0"

"""Powers, anti-powers and block-patterns in words."""

__version__ = "0.1.0"

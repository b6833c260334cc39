"""Self-dual code machinery for the quasi-symmetric 2-(37,9,8) non-existence search."""

__version__ = "1.0.0"

"""Homological checks of Dehn-twist generating sets for nonorientable surfaces."""

__version__ = "0.1.0"

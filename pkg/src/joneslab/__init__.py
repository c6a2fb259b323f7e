"""Kauffman brackets, colored Jones polynomials and degree bounds for link diagrams."""

__version__ = "0.1.0"

"""Bergmann and Wirtinger tau functions on Hurwitz spaces."""

__version__ = "0.1.0"

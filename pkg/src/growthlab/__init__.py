"""Exact set arithmetic and executable squeezing arguments for sum-product growth."""
__version__ = "0.1.0"

"""Exact engine for 2-categories of group-symmetric projective bimodules."""

__version__ = "0.1.0"

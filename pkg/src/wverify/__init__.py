"""Variance-witness toolkit for single-photon W-type mode entanglement."""

__version__ = "0.1.0"

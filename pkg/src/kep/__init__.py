"""Kinetic-energy-partition (KEP) solvers for quantum systems with competing potentials."""

__version__ = "0.1.0"

"""Vacuum-polarization potentials (Uehling and Kallen-Sabry) for point and
Fermi nuclear charge distributions."""

__version__ = "0.1.0"

"""Spin and optical manipulation of nuclear-quadrupole doublets.

Models half-integer nuclear spins split into doublets by a quadrupole
interaction, with a weak magnetic bias field lifting each doublet's
degeneracy: RF driving of two doublets, optically detected NMR, chirped
adiabatic transfer, AFC hole burning, and spin-wave echo sequences.
"""

__version__ = "0.1.0"

"""Exact computations for definable sets over p-adic fields.

Subpackages: formula (two-sorted formulas), presburger (Presburger QE with
ord constants), vgqe (value-group elimination), cfun (constructible
functions and their sums), padic (the Q_p oracle), igusa (zeta functions
from root counts).
"""
__version__ = "0.1.0"

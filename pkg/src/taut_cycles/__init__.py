"""Taut cycles and Morse indices on orbits of polar representations.

The package has five layers:

* :mod:`taut_cycles.rootsys` builds restricted root systems and Weyl groups.
* :mod:`taut_cycles.bruhat` enumerates Bruhat cells of ``G/P_Θ``.
* :mod:`taut_cycles.morse` computes Morse indices of height functions by wall crossings.
* :mod:`taut_cycles.reduced` models the exceptional cohomogeneity-three cases on ``S^2``.
* :mod:`taut_cycles.numlie` checks that model against explicit matrix representations.
"""

__version__ = "1.0.0"

from .bruhat import BruhatCell, PoincarePolynomial, ThetaSubset, bruhat_cells, poincare_polynomial
from .morse import ChamberPoint, crossing_sequence, morse_index, verify_bruhat_correspondence
from .rootsys import RootSystem, build_root_system, load_spec, weyl_group

__all__ = [
    "__version__",
    "BruhatCell",
    "ChamberPoint",
    "PoincarePolynomial",
    "RootSystem",
    "ThetaSubset",
    "bruhat_cells",
    "build_root_system",
    "crossing_sequence",
    "load_spec",
    "morse_index",
    "poincare_polynomial",
    "verify_bruhat_correspondence",
    "weyl_group",
]

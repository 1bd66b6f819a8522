"""Distributional workbench for the square well.

Core layers:

- ``distcalc``   exact calculus for piecewise-smooth distributions with
  Heaviside windows and limit-weighted Dirac deltas
- ``isw``        the reformed infinite square well (edge deltas instead of
  an infinite barrier), two spectrum solvers, residual and jump checks
- ``ehrenfest``  wave packets, closed-form Ehrenfest verification, and an
  independent quadrature oracle
- ``finitewell`` finite-well bound states and the deep-well limit study
- ``service``    FastAPI wrapper; ``cli`` is a thin HTTP client
"""

from .distcalc import DeltaAtom, Distribution, Piece, SmoothExpr, Term
from .ehrenfest import WavePacket
from .finitewell import FiniteWellConfig, FiniteWellSolution
from .isw import EigenSolution, EnergySign, ResidualReport, WellConfig

__all__ = [
    "DeltaAtom",
    "Distribution",
    "EigenSolution",
    "EnergySign",
    "FiniteWellConfig",
    "FiniteWellSolution",
    "Piece",
    "ResidualReport",
    "SmoothExpr",
    "Term",
    "WavePacket",
    "WellConfig",
]

__version__ = "0.1.0"

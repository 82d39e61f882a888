"""Exact decisions about Frobenius pairs of functors over the rationals.

Finite-dimensional algebras, bimodules, Hopf algebras, coalgebras and
corings are represented by structure constants with exact rational entries.
Decision procedures return a :class:`~frobpair.verdict.Verdict` whose
positive answers carry a certificate that can be re-checked independently.
"""

from .verdict import INCONCLUSIVE, NO, YES, Verdict

__version__ = "0.1.0"

__all__ = ["Verdict", "YES", "NO", "INCONCLUSIVE", "__version__"]

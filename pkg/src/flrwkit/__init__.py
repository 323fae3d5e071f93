"""flrwkit: numerical diagnostics and symmetric coordinate charts for FLRW
spacetimes.

The toolkit turns hypotheses of low-regularity inextendibility criteria into
machine-checkable diagnostics (limits and improper integrals of the scale
factor), builds the strongly spherically symmetric and strongly axisymmetric
coordinate charts numerically, and verifies every chart identity with
finite-difference oracles.
"""

__version__ = "0.1.0"

from . import axi_chart, catalog, criteria, expr, probe, scale_factor, sph_chart, verify  # noqa: F401
from .errors import FlrwkitError  # noqa: F401

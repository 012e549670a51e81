"""nsumbox: finite-field sum-box toolkit.

Symplectic linear algebra over GF(p^r), construction and classical
evaluation of (kappa, N)-sum boxes, a brute-force quantum state-vector
oracle certifying them, and the QCSA code pipeline with desk-scale
QPIR/SDBMM rate demonstrations.
"""

from .gf import FieldElement, FieldParams, make_field
from .matfq import MatrixFq

__version__ = "0.1.0"

__all__ = ["FieldElement", "FieldParams", "MatrixFq", "make_field", "__version__"]

"""Exact and numeric tools for the C_n quantum Knizhnik-Zamolodchikov system.

Submodules:

* ``ring``      Laurent polynomials and rational functions in v, u, y, x
* ``weyl``      the hyperoctahedral group W(C_n) and its root data
* ``rmatrix``   R-matrices, Yang-Baxter checks and QKZ transport operators
* ``hecke``     the phi basis, Lusztig operators and the Hecke relations
* ``macdonald`` one-row Macdonald polynomials and the eigen-operator E
* ``qintegral`` numeric Jackson-type brackets and the QKZ equations
"""
from .report import Report, SCHEMA_VERSION
from .ring import LaurentPoly, RatFunc, Ring, frac_equal
from .rmatrix import QKZParams, induced_matrix, qkz_transport, r_coeffs
from .hecke import lusztig_T, phi
from .macdonald import apply_E, eigenvalue_c, m_basis, macdonald_onerow
from .qintegral import NumericPoint, bracket, verify_qkz

__all__ = [
    "LaurentPoly", "NumericPoint", "QKZParams", "RatFunc", "Report", "Ring", "SCHEMA_VERSION",
    "apply_E", "bracket", "eigenvalue_c", "frac_equal", "induced_matrix", "lusztig_T",
    "m_basis", "macdonald_onerow", "phi", "qkz_transport", "r_coeffs", "verify_qkz",
]
__version__ = "0.1.0"

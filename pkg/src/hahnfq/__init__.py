"""Roots of polynomials over Hahn series fields F_q((t^Q)).

Exact finite-field arithmetic, linearized recurrences, twist-recurrent
series and a Newton-polygon root expander with period certification.
"""

from .errors import HahnError
from .ffield import GF, FieldDesc, FqElem, field_from_string
from .exponents import SupportCert
from .lrr import LRRSpec, PeriodCert
from .series import FiniteSeries, OracleSeries, Series, from_terms, materialize, window_equal
from .twistrec import CoeffFunction, TRSeries, algebraicity_witness, as_solve, build_tr, detect_tr, twist_operator
from .rootfind import SeriesPoly, expand_root, find_roots, verify_root

__all__ = [
    "HahnError", "GF", "FieldDesc", "FqElem", "field_from_string", "SupportCert",
    "LRRSpec", "PeriodCert", "Series", "FiniteSeries", "OracleSeries", "from_terms",
    "materialize", "window_equal", "CoeffFunction", "TRSeries", "algebraicity_witness",
    "as_solve", "build_tr", "detect_tr", "twist_operator", "SeriesPoly", "expand_root",
    "find_roots", "verify_root",
]

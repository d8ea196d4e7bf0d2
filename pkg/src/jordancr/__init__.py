"""Generalized cross ratios on tube-type bounded symmetric domains.

Euclidean Jordan algebra models, Shilov boundary geometry, Maslov indices,
kernel-based cross ratios and surface-group translation-length experiments.
"""

__version__ = "0.1.0"

from .algebra import DirectSum, RealLine, Spin, Sym, parse_algebra, real_power  # noqa: E402
from .kernel import classify_quadruple, cross_ratio, cross_ratio_path_a, maslov  # noqa: E402

__all__ = ["DirectSum", "RealLine", "Spin", "Sym", "parse_algebra", "real_power",
           "classify_quadruple", "cross_ratio", "cross_ratio_path_a", "maslov", "__version__"]

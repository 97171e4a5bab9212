from .base import NodeSubset, WeylDatum, WeylElement, build_weyl
from .polynomial import CountPolynomial

__all__ = ["NodeSubset", "WeylDatum", "WeylElement", "build_weyl", "CountPolynomial"]

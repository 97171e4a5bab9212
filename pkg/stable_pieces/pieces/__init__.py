from .base import PieceEnumerator
from .types import PieceDescriptor, PieceState, PieceStep, SumCheck, TwistedPair

__all__ = ["PieceEnumerator", "PieceDescriptor", "PieceState", "PieceStep", "SumCheck", "TwistedPair"]

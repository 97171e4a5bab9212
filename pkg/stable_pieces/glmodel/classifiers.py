"""Explicit piece labels for the two one-line configurations.

Both take b in canonical coordinates of the subquotients involved and return
k in [1, d].
"""

import numpy as np

from stable_pieces.glmodel.field import Subquotient, Subspace, apply_coords, mat_inverse


def classify_line_pair(V1: Subspace, Vp1: Subspace, b: np.ndarray) -> int:
    """Lines V_1, V'_1 and b : V/V_1 -> V/V'_1.

    V_j is the preimage under b of (V_{j-1} + V'_1)/V'_1; the label is the
    first k with V'_1 <= V_k.
    """
    whole = Subspace.full(V1.d, V1.p)
    source, target = Subquotient(whole, V1), Subquotient(whole, Vp1)
    b_inv = mat_inverse(b, V1.p)
    current = V1
    for k in range(1, V1.d + 1):
        if Vp1 <= current:
            return k
        pulled = apply_coords(b_inv, target.subspace_coords(current + Vp1))
        current = source.lift_subspace(pulled)
    raise AssertionError("V'_1 must lie in V_d = V")


def classify_line_hyperplane(V1: Subspace, H: Subspace, b: np.ndarray) -> int:
    """A line V_1, a hyperplane H and b : V/V_1 -> H.

    V_j = V_1 + b^-1(V_{j-1}) while V_{j-1} <= H; the label is the first k
    with V_k not inside H, i.e. V_{k-1} = V_k cap H.
    """
    whole = Subspace.full(V1.d, V1.p)
    source, target = Subquotient(whole, V1), Subquotient(H, Subspace.zero(V1.d, V1.p))
    b_inv = mat_inverse(b, V1.p)
    current = V1
    for k in range(1, V1.d + 1):
        if not current <= H:
            return k
        pulled = apply_coords(b_inv, target.subspace_coords(current))
        current = source.lift_subspace(pulled)
    raise AssertionError("V_d = V is never inside a hyperplane")

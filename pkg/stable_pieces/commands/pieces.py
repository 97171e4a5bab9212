from typing import Any

from stable_pieces.commands.base import load_datum, load_pair
from stable_pieces.config import RunConfig
from stable_pieces.pieces import PieceDescriptor, PieceEnumerator, TwistedPair
from stable_pieces.pieces.types import subset_text
from stable_pieces.report import Report

PIECE_COLUMNS = ["J", "Jprime", "y", "sigma_id", "steps", "w", "J_inf", "twist", "exponent", "count", "dim"]
VERIFY_COLUMNS = ["J", "Jprime", "y", "pieces", "lhs", "rhs", "injective", "uncancelled", "holds"]


def _piece_row(tp: TwistedPair, sigma_id: int, sigma: PieceDescriptor) -> dict[str, Any]:
    return {
        "J": subset_text(tp.J),
        "Jprime": subset_text(tp.Jp),
        "y": repr(tp.y),
        "sigma_id": sigma_id,
        "steps": sigma.steps_text(),
        "w": repr(sigma.w),
        "J_inf": subset_text(sigma.J_inf),
        "twist": repr(sigma.twist),
        "exponent": sigma.exponent,
        "count": sigma.count.factored(),
        "dim": sigma.dim,
    }


def run_pieces(cfg: RunConfig) -> Report:
    """Pieces of one twisted pair, or of every valid pair when --J is absent."""
    datum = load_datum(cfg)
    enumerator = PieceEnumerator(datum, cfg.guards)
    pairs = [load_pair(cfg, datum)] if cfg.J is not None else enumerator.valid_pairs()

    rows, pieces = [], []
    for tp in pairs:
        for sigma_id, sigma in enumerate(enumerator.enumerate(tp)):
            rows.append(_piece_row(tp, sigma_id, sigma))
            pieces.append({**enumerator.descriptor_json(sigma), "fibre_dims": enumerator.fibre_dims(sigma)})

    return Report(
        command="pieces",
        title=f"Pieces of {datum.type_spec}",
        payload={
            "type": datum.type_spec,
            "delta": [datum.delta[i] for i in sorted(datum.nodes)],
            "pairs": len(pairs),
            "pieces": pieces,
        },
        rows=rows,
        columns=PIECE_COLUMNS,
        footer=[f"{len(rows)} pieces over {len(pairs)} twisted pairs"],
    )


def run_verify(cfg: RunConfig) -> Report:
    """Check the Poincare identity for every valid twisted pair."""
    datum = load_datum(cfg)
    enumerator = PieceEnumerator(datum, cfg.guards)
    checks = enumerator.sweep()
    rows = [
        {
            "J": subset_text(frozenset(check.J)),
            "Jprime": subset_text(frozenset(check.Jprime)),
            "y": repr(datum.element_from_word(check.y)),
            "pieces": check.pieces,
            "lhs": str(check.lhs),
            "rhs": str(check.rhs),
            "injective": check.injective,
            "uncancelled": all(a == b for a, b in check.uncancelled.values()),
            "holds": check.holds,
        }
        for check in checks
    ]
    failures = sum(1 for check in checks if not check.holds)
    return Report(
        command="verify",
        title=f"Poincare identity for {datum.type_spec}",
        payload={
            "type": datum.type_spec,
            "delta": [datum.delta[i] for i in sorted(datum.nodes)],
            "checks": [check.to_json() for check in checks],
            "passed": failures == 0,
        },
        rows=rows,
        columns=VERIFY_COLUMNS,
        footer=[f"{len(checks) - failures}/{len(checks)} pairs pass"],
        passed=failures == 0,
    )

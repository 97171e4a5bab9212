from .base import Command, CommandOutcome, Dispatcher
from .glcheck import run_glcheck
from .pieces import run_pieces, run_verify
from .wonderful import run_wonderful

COMMANDS = [
    Command("pieces", "Enumerate the pieces of a twisted pair, or of every valid pair.", run_pieces),
    Command("verify", "Check the Poincare identity for every valid twisted pair.", run_verify),
    Command("wonderful", "Assemble the piece atlas of the wonderful completion (adjoint).", run_wonderful),
    Command("glcheck", "Cross-check pieces against an exhaustive GL_d(F_q) model.", run_glcheck),
]


def default_dispatcher() -> Dispatcher:
    return Dispatcher(COMMANDS)


__all__ = [
    "COMMANDS",
    "Command",
    "CommandOutcome",
    "Dispatcher",
    "default_dispatcher",
    "run_glcheck",
    "run_pieces",
    "run_verify",
    "run_wonderful",
]

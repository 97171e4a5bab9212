from collections.abc import Callable

from opentelemetry import trace
from opentelemetry.trace.status import Status, StatusCode
from pydantic import BaseModel, Field

from stable_pieces.config import RunConfig
from stable_pieces.errors import InvalidTwistedPair, StablePiecesError
from stable_pieces.pieces import TwistedPair
from stable_pieces.report import Report
from stable_pieces.weyl import WeylDatum, build_weyl
from stable_pieces.weyl.base import parse_subset


class CommandDesc(BaseModel):
    name: str = Field(description="subcommand name")
    description: str = Field(description="one-line help")


class Command:
    """A named subcommand wrapping ``func(cfg) -> Report``."""

    def __init__(self, name: str, description: str, func: Callable[[RunConfig], Report]) -> None:
        self._meta = CommandDesc(name=name, description=description)
        self._func = func

    @property
    def name(self) -> str:
        return self._meta.name

    @property
    def description(self) -> str:
        return self._meta.description

    def __repr__(self) -> str:
        return f"Command(name={self._meta.name}, description={self._meta.description})"

    def __call__(self, cfg: RunConfig) -> Report:
        return self._func(cfg)


class CommandOutcome(BaseModel):
    report: Report | None = None
    exit_code: int = 0
    message: str | None = None


class Dispatcher:
    def __init__(self, commands: list[Command]) -> None:
        self.commands = {command.name: command for command in commands}
        self.tracer = trace.get_tracer("stable_pieces.commands")

    def dispatch(self, cfg: RunConfig) -> CommandOutcome:
        with self.tracer.start_as_current_span("dispatch") as span:
            span.set_attribute("command.name", cfg.subcommand)
            span.set_attribute("command.type", cfg.type_spec)

            if cfg.subcommand not in self.commands:
                error_msg = f"Command '{cfg.subcommand}' not found. Available: {', '.join(self.commands)}"
                span.set_status(Status(StatusCode.ERROR, error_msg))
                return CommandOutcome(exit_code=2, message=error_msg)

            command = self.commands[cfg.subcommand]
            try:
                report = command(cfg)
            except StablePiecesError as e:
                error_msg = f"{cfg.subcommand}: {type(e).__name__}: {e}"
                span.set_status(Status(StatusCode.ERROR, error_msg))
                span.record_exception(e)
                return CommandOutcome(exit_code=e.exit_code, message=error_msg)

            span.set_attribute("report.rows", len(report.rows))
            span.set_attribute("report.passed", report.passed)
            if not report.passed:
                span.set_status(Status(StatusCode.ERROR, f"{cfg.subcommand} verification failed"))
                return CommandOutcome(report=report, exit_code=1, message=f"{cfg.subcommand}: verification failed")
            return CommandOutcome(report=report)


def load_datum(cfg: RunConfig) -> WeylDatum:
    return build_weyl(cfg.type_spec, cfg.delta)


def load_pair(cfg: RunConfig, datum: WeylDatum) -> TwistedPair:
    """The twisted pair named by --J/--y; y defaults to the identity."""
    try:
        J = parse_subset(cfg.J, datum.rank)
        y = datum.parse_word(cfg.y) if cfg.y is not None else None
    except ValueError as e:
        raise InvalidTwistedPair(str(e)) from e
    return TwistedPair.create(datum, J, y)

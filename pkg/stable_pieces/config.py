import os
from pathlib import Path
from typing import Literal

import sympy
from pydantic import BaseModel, Field, field_validator, model_validator

from stable_pieces.report import ReportFormat

GUARD_ENV = "STABLE_PIECES_GUARD"

Subcommand = Literal["pieces", "verify", "wonderful", "glcheck"]
ModelMode = Literal["two_step_1dim", "hyperplane_dual", "full"]

# numeric spellings accepted on the command line
MODE_ALIASES: dict[str, ModelMode] = {"10.2": "two_step_1dim", "10.3": "hyperplane_dual"}


class GuardConfig(BaseModel):
    max_quadruples: int = Field(default=10**7, description="largest exhaustive quadruple enumeration")
    max_group_order: int = Field(default=200_000, description="largest GL_d(F_q) scanned element by element")
    iteration_slack: int = Field(default=4, description="additive slack of the 4|I| piece recursion guard")

    @classmethod
    def from_env(cls) -> "GuardConfig":
        raw = os.environ.get(GUARD_ENV)
        if not raw:
            return cls()
        try:
            return cls(max_quadruples=int(raw))
        except ValueError as e:
            raise ValueError(f"{GUARD_ENV} must be an integer, got {raw!r}") from e

    def depth_guard(self, rank: int) -> int:
        return 4 * rank + self.iteration_slack

    def refine_guard(self, d: int) -> int:
        return 2 * d + self.iteration_slack


class RunConfig(BaseModel):
    subcommand: Subcommand
    type_spec: str = "A2"
    delta: list[int] | None = None
    J: str | None = Field(default=None, description="node subset, e.g. '1,3'; empty string is the empty set")
    y: str | None = Field(default=None, description="reduced word such as 's1 s2' or 'e'")
    output_format: ReportFormat = ReportFormat.TEXT
    output_path: Path | None = None
    d: int = 2
    q: int = 2
    mode: ModelMode = "two_step_1dim"
    blocks: list[int] | None = None
    sigma: list[int] | None = None
    verbose: bool = False
    guards: GuardConfig = Field(default_factory=GuardConfig.from_env)

    @field_validator("mode", mode="before")
    @classmethod
    def _resolve_mode(cls, value: str) -> str:
        return MODE_ALIASES.get(value, value)

    @model_validator(mode="after")
    def _check_flags(self) -> "RunConfig":
        if self.y is not None and self.J is None:
            raise ValueError("--y requires --J")
        if self.subcommand == "glcheck":
            if not sympy.isprime(self.q):
                raise ValueError(f"--q must be a prime, got {self.q}")
            if self.d < 2:
                raise ValueError(f"--d must be at least 2, got {self.d}")
            if self.mode == "full":
                blocks = self.blocks or [1] * self.d
                if any(b <= 0 for b in blocks) or sum(blocks) != self.d:
                    raise ValueError(f"--blocks {blocks} must be positive and sum to d={self.d}")
                sigma = self.sigma or list(range(1, len(blocks) + 1))
                if sorted(sigma) != list(range(1, len(blocks) + 1)):
                    raise ValueError(f"--sigma {sigma} is not a permutation of 1..{len(blocks)}")
        elif self.blocks is not None or self.sigma is not None:
            raise ValueError("--blocks/--sigma only apply to glcheck --mode full")
        if self.subcommand in ("verify", "wonderful") and (self.J is not None or self.y is not None):
            raise ValueError(f"{self.subcommand} iterates over every J; --J/--y are not accepted")
        return self

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, fields
from fractions import Fraction
from pathlib import Path

from .errors import InputError


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and knobs shared by the solvers.

    ``chart_variable=None`` lets the solver pick the first variable whose
    hyperplane carries no solution ray.
    """

    seed: int = 0
    residual_bound: float = 1e-8
    cluster_tol: float = 1e-6
    max_retries: int = 8
    float_precision_bits: int = 128
    chart_variable: int | None = None
    matrix_size_cap: int = 3000
    direction_range: int = 7
    realness_tol: float = 1e-8
    epsilon0: float = 1e-3
    refine_tol: float = 1e-6
    max_refine_steps: int = 40
    perturb: bool = False

    def __post_init__(self):
        if self.residual_bound <= 0 or self.cluster_tol <= 0:
            raise InputError("tolerances must be positive")
        if self.max_retries < 1:
            raise InputError("max_retries must be at least 1")
        if self.float_precision_bits < 53:
            raise InputError("float_precision_bits must be at least 53")
        if self.direction_range < 1:
            raise InputError("direction_range must be at least 1")
        if self.epsilon0 <= 0:
            raise InputError("epsilon0 must be positive")

    def replace(self, **changes) -> "SolverConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SolverConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path: str | Path) -> "SolverConfig":
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise InputError(f"cannot read config file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise InputError("config file must hold a JSON object")
        return cls.from_dict(data)

    def epsilon0_rational(self) -> Fraction:
        return Fraction(self.epsilon0).limit_denominator(10**12)

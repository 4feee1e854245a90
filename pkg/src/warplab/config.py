"""Run configuration: file + flag parsing with strict key validation."""

import dataclasses
import json
import os
from dataclasses import dataclass, field

MODES = (
    "ricci-check",
    "build-example",
    "orbit-growth",
    "capacity",
    "grushin-compare",
    "full-suite",
)


class ConfigError(ValueError):
    def __init__(self, key, reason):
        super().__init__(f"config key '{key}': {reason}")
        self.key = key
        self.reason = reason


@dataclass
class RunConfig:
    mode: str
    # model parameters
    alpha: float = 0.5
    beta: float | None = None
    A: float | None = None
    B: float | None = None
    R11: float = 100.0
    periods: int = 2
    k: int | None = None
    k_max: int | None = None
    # numerics
    r_min: float = 1e-3
    r_max: float = 1e6
    grid_points: int = 4000
    quad_rel_tol: float = 1e-9
    oracle_rel_tol: float = 1e-5
    radius_bound: float = 1e300
    # sampling
    seed: int = 12345
    lambda_ladder: tuple = (1e2, 1e3, 1e4)
    probe_pairs: int = 20
    # I/O
    outdir: str = "runs"
    cache_dir: str | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError("mode", f"unknown mode {self.mode!r}; choose from {MODES}")
        if self.alpha <= 0:
            raise ConfigError("alpha", "must be positive")
        if self.is_oscillating():
            if self.beta is None or self.A is None or self.B is None:
                raise ConfigError("beta", "oscillating model needs alpha, beta, A, B")
            if not (self.B > self.beta > self.alpha > self.A > 0):
                raise ConfigError("B", "need B > beta > alpha > A > 0")
            if self.R11 < 100:
                raise ConfigError("R11", "first junction radius must be >= 100")
            if self.periods < 1 and self.mode in ("build-example", "orbit-growth", "full-suite"):
                raise ConfigError("periods", "need at least one period for this mode")
        for key in ("r_min", "r_max", "quad_rel_tol", "oracle_rel_tol", "radius_bound"):
            if getattr(self, key) <= 0:
                raise ConfigError(key, "tolerances and ranges must be positive")
        if self.r_min >= self.r_max:
            raise ConfigError("r_min", "must be below r_max")
        if self.grid_points < 2:
            raise ConfigError("grid_points", "need at least 2 grid points")
        self.lambda_ladder = tuple(float(x) for x in self.lambda_ladder)

    def is_oscillating(self) -> bool:
        return self.beta is not None or self.mode in ("build-example",)

    def model_payload(self) -> dict:
        """Hash payload identifying the distance model."""
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "A": self.A,
            "B": self.B,
            "R11": self.R11,
            "periods": self.periods,
            "radius_bound": self.radius_bound,
            "family": "inverse-power",
            "version": 1,
        }

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["lambda_ladder"] = list(self.lambda_ladder)
        return d

    def to_file(self, path: str):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


_FIELDS = {f.name for f in dataclasses.fields(RunConfig)}


def config_from_dict(data: dict) -> RunConfig:
    unknown = set(data) - _FIELDS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown key")
    if "mode" not in data:
        raise ConfigError("mode", "required")
    if "lambda_ladder" in data and data["lambda_ladder"] is not None:
        data = dict(data)
        data["lambda_ladder"] = tuple(data["lambda_ladder"])
    return RunConfig(**data)


def parse_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Config from a JSON file, flag overrides on top; unknown keys rejected."""
    data = {}
    if path is not None:
        if not os.path.exists(path):
            raise ConfigError("config", f"file not found: {path}")
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as e:
                raise ConfigError("config", f"invalid JSON: {e}") from e
    for key, val in (overrides or {}).items():
        if val is not None:
            data[key] = val
    return config_from_dict(data)

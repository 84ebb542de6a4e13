"""Run configuration: every physical, behavioral, numerical and sampling knob.

A config is a flat record. The JSON form uses exactly the field names below;
unknown keys are rejected so typos fail loudly instead of silently running the
defaults. ``T`` is the imitation temperature of the decision rule:

* ``T is None``  -> automata mode, states are frozen and no decisions happen;
* ``T = inf``    -> decisions happen but reduce to fair coin flips;
* ``0 < T < inf``-> majority imitation, stronger as T shrinks.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields

from .errors import ConfigError

#: Edge-to-edge distance beyond which the social force is treated as zero.
#: 2000 * exp(-0.8 / 0.08) ~ 0.09 N, under 0.05% of the driving-force scale.
SOCIAL_CUTOFF = 0.8


@dataclass(frozen=True)
class SimConfig:
    """All parameters of a single simulation run."""

    N_p: int = 60              # number of agents (even)
    L: float = 7.0             # door width, m
    A0: float = 2000.0         # social force amplitude, N
    B: float = 0.08            # social force decay length, m
    d_sw: float = 0.15         # repulsive/attractive switch distance, m
    k_n: float = 1.2e5         # contact normal stiffness, N/m
    k_t: float = 2.4e5         # contact tangential friction, kg/(m s)
    tau: float = 0.5           # driving-force relaxation time, s
    T: float | None = None     # imitation temperature (None = automata mode)
    dt: float = 1e-3           # integration step, s
    sample_interval: float = 0.2   # sampling cadence, s (integer multiple of dt)
    N_T: int = 30000           # number of recorded samples
    warmup: float = 200.0      # discarded initial stretch, s
    seed: int = 0              # RNG seed (64-bit)
    kappa: int = 8             # neighbor count of the density estimator

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not isinstance(self.N_p, int) or self.N_p < 2 or self.N_p % 2 != 0:
            raise ConfigError(f"N_p must be an even integer >= 2, got {self.N_p!r}")
        for key in ("L", "A0", "B", "d_sw", "k_n", "k_t", "tau"):
            value = getattr(self, key)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigError(f"{key} must be a positive finite number, got {value!r}")
        if self.T is not None:
            if not isinstance(self.T, (int, float)) or math.isnan(self.T) or self.T <= 0:
                raise ConfigError(f"T must be positive (or inf, or absent), got {self.T!r}")
        if not (isinstance(self.dt, (int, float)) and math.isfinite(self.dt) and self.dt > 0):
            raise ConfigError(f"dt must be positive, got {self.dt!r}")
        if not (math.isfinite(self.sample_interval) and self.sample_interval >= self.dt):
            raise ConfigError(
                f"sample_interval must be >= dt, got {self.sample_interval!r} (dt={self.dt!r})"
            )
        ratio = self.sample_interval / self.dt
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ConfigError(
                f"sample_interval must be an integer multiple of dt "
                f"(got {self.sample_interval!r} / {self.dt!r})"
            )
        if not isinstance(self.N_T, int) or self.N_T < 1:
            raise ConfigError(f"N_T must be a positive integer, got {self.N_T!r}")
        if not (isinstance(self.warmup, (int, float)) and self.warmup >= 0):
            raise ConfigError(f"warmup must be non-negative, got {self.warmup!r}")
        wr = self.warmup / self.dt
        if abs(wr - round(wr)) > 1e-9 * max(1.0, wr):
            raise ConfigError(f"warmup must be an integer multiple of dt, got {self.warmup!r}")
        if not isinstance(self.seed, int) or not (0 <= self.seed < 2**64):
            raise ConfigError(f"seed must be an integer in [0, 2^64), got {self.seed!r}")
        if not isinstance(self.kappa, int) or self.kappa < 1 or self.kappa >= self.N_p:
            raise ConfigError(f"kappa must satisfy 1 <= kappa < N_p, got {self.kappa!r}")

    # -- mode and step bookkeeping ------------------------------------------

    @property
    def decisions_enabled(self) -> bool:
        return self.T is not None

    @property
    def steps_per_sample(self) -> int:
        return round(self.sample_interval / self.dt)

    @property
    def warmup_steps(self) -> int:
        return round(self.warmup / self.dt)

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        data = asdict(self)
        if self.T is None:
            del data["T"]
        elif math.isinf(self.T):
            data["T"] = "inf"
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "SimConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config key: {unknown[0]!r}")
        kwargs = dict(data)
        if "T" in kwargs:
            kwargs["T"] = _parse_temperature(kwargs["T"])
        for name in ("N_p", "N_T", "seed", "kappa"):
            if name in kwargs:
                kwargs[name] = _as_int(name, kwargs[name])
        return cls(**kwargs)

    @classmethod
    def from_json_file(cls, path) -> "SimConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        return cls.from_dict(data)


def _parse_temperature(raw):
    if raw is None:
        return None
    if isinstance(raw, str):
        if raw.lower() in ("inf", "infinity"):
            return math.inf
        raise ConfigError(f"T must be a number or 'inf', got {raw!r}")
    if isinstance(raw, (int, float)):
        return float(raw)
    raise ConfigError(f"T must be a number or 'inf', got {raw!r}")


def _as_int(name, raw):
    if isinstance(raw, bool) or not isinstance(raw, int):
        if isinstance(raw, float) and raw.is_integer():
            return int(raw)
        raise ConfigError(f"{name} must be an integer, got {raw!r}")
    return raw

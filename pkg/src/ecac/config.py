"""Run configuration: flat key = value config files plus flag overrides."""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from .data import Dataset, GroundTruth, generate_gaussian_mixture, load_csv
from .errors import ConfigError

# Percentiles swept when no delta option is given and ground truth is
# available to rank the sweep.
DEFAULT_SWEEP = (0.005, 0.01, 0.02, 0.04, 0.08)
DEFAULT_PERCENTILE = 0.02


def _parse_scalar(text: str):
    text = text.strip()
    if len(text) >= 2 and text[0] == '"' and text[-1] == '"':
        return text[1:-1]
    low = text.lower()
    if low == "true":
        return True
    if low == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def parse_config_file(path) -> dict:
    """Parse a flat ``key = value`` file (# comments, [..] lists, quotes)."""
    values = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if value.startswith("[") and value.endswith("]"):
            inner = value[1:-1].strip()
            values[key] = (
                [_parse_scalar(v) for v in inner.split(",")] if inner else []
            )
        else:
            values[key] = _parse_scalar(value)
    return values


@dataclass
class RunConfig:
    """Everything a benchmark run needs, resolvable from file and flags."""

    data: str | None = None
    label_col: int | str | None = None
    gen_k: int | None = None
    gen_n: object = None  # int or per-cluster list
    gen_means: object = None  # "x,y | x,y | ..." or nested list
    gen_stddev: object = 1.0
    gen_seed: int = 0
    algo: str = "kmeans"
    k: int = 0
    delta: float | None = None
    delta_percentile: float | None = None
    delta_sweep: list[float] | None = None
    strategy: str = "local"
    cap: int | None = None
    seed: int = 0
    d_c: float | None = None
    max_iter: int = 300
    normalize: bool = False
    out: str = "results"

    @classmethod
    def from_sources(cls, file_values: dict | None, flag_values: dict) -> "RunConfig":
        """Config file first, then flags; flags win."""
        config = cls()
        known = set(config.__dataclass_fields__)
        for source, values in (("config file", file_values or {}), ("flag", flag_values)):
            for key, value in values.items():
                if value is None:
                    continue
                if key not in known:
                    raise ConfigError(f"unknown {source} key {key!r}")
                setattr(config, key, value)
        config.validate()
        return config

    def validate(self):
        has_file = self.data is not None
        has_gen = self.gen_k is not None
        if has_file == has_gen:
            raise ConfigError(
                "exactly one dataset source required: 'data' or a gen_* block"
            )
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.delta_sweep is not None and not self.delta_sweep:
            raise ConfigError("delta_sweep must be nonempty")
        given = [
            name
            for name, value in (
                ("delta", self.delta),
                ("delta_percentile", self.delta_percentile),
                ("delta_sweep", self.delta_sweep),
            )
            if value is not None
        ]
        if len(given) > 1:
            raise ConfigError(f"choose one delta option, got {given}")
        if self.algo not in ("kmeans", "dpc"):
            raise ConfigError(f"algo must be 'kmeans' or 'dpc', got {self.algo!r}")
        if self.strategy not in ("local", "global", "random", "nodensity"):
            raise ConfigError(f"unknown strategy {self.strategy!r}")

    def echo(self) -> dict:
        """The determinism-relevant part of the config, for result records."""
        record = asdict(self)
        return {key: value for key, value in record.items() if value is not None}

    def _generator_spec(self):
        means = self.gen_means
        if means is None:
            raise ConfigError("generator block needs gen_means")
        if isinstance(means, str):
            means = [
                [float(x) for x in group.split(",")]
                for group in means.split("|")
                if group.strip()
            ]
        counts = self.gen_n if self.gen_n is not None else 100
        return self.gen_k, counts, means, self.gen_stddev, self.gen_seed

    def load_dataset(self) -> tuple[Dataset, GroundTruth | None]:
        if self.data is not None:
            path = Path(self.data)
            if not path.exists():
                raise ConfigError(f"dataset file not found: {path}")
            dataset, truth = load_csv(path, self.label_col)
        else:
            dataset, truth = generate_gaussian_mixture(*self._generator_spec())
        if self.normalize:
            dataset = min_max_normalize(dataset)
        return dataset, truth


def min_max_normalize(dataset: Dataset) -> Dataset:
    """Scale each feature to [0, 1]; constant features map to 0."""
    pts = dataset.points
    lo = pts.min(axis=0)
    span = pts.max(axis=0) - lo
    span = np.where(span > 0, span, 1.0)
    return Dataset((pts - lo) / span)

"""Experiment configuration files (TOML)."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError
from .geometry import CompactSetSpec

TOP_LEVEL = {"scenario", "resolution", "refine", "seed", "out", "a", "k", "tol", "workers",
             "sets", "corpus", "params"}
CORPUS_KEYS = {"count", "max_degree", "root_placement"}


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run needs; ``params`` holds scenario-specific settings."""

    scenario: str
    resolution: int = 256
    refine: int | None = None
    seed: int = 0
    out: str = "pshlab_run"
    a: float = 2.0
    k: int = 128
    tol: float = 0.03
    workers: int = 1
    sets: tuple[CompactSetSpec, ...] = ()
    expect: tuple[dict, ...] = ()
    corpus: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def with_overrides(self, **kw) -> "ExperimentConfig":
        vals = {k: v for k, v in kw.items() if v is not None}
        return ExperimentConfig(**{**self.__dict__, **vals})

    def _set_table(self, i: int) -> dict:
        d = self.sets[i].to_dict()
        if i < len(self.expect):
            d.update({f"expect_{k}": v for k, v in self.expect[i].items()})
        return d

    def to_dict(self) -> dict:
        return {"scenario": self.scenario, "resolution": self.resolution, "refine": self.refine,
                "seed": self.seed, "out": self.out, "a": self.a, "k": self.k, "tol": self.tol,
                "workers": self.workers, "sets": [self._set_table(i) for i in range(len(self.sets))],
                "corpus": dict(self.corpus), "params": dict(self.params)}


def _typed(raw: dict, key: str, kind, default, check=None, why=""):
    if key not in raw:
        return default
    val = raw[key]
    if kind is float and isinstance(val, int) and not isinstance(val, bool):
        val = float(val)
    if not isinstance(val, kind) or isinstance(val, bool) and kind is not bool:
        raise ConfigError(f"expected {kind.__name__}, got {val!r}", key)
    if check is not None and not check(val):
        raise ConfigError(why or f"invalid value {val!r}", key)
    return val


def parse_config(raw: dict, scenarios=None) -> ExperimentConfig:
    unknown = set(raw) - TOP_LEVEL
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}", sorted(unknown)[0])
    if "scenario" not in raw:
        raise ConfigError("missing", "scenario")
    scenario = raw["scenario"]
    if scenarios is not None and scenario not in scenarios:
        raise ConfigError(f"unknown scenario {scenario!r}; choose from {sorted(scenarios)}", "scenario")
    res = _typed(raw, "resolution", int, 256, lambda v: v >= 16, "must be >= 16")
    refine = _typed(raw, "refine", int, None, lambda v: v >= 16, "must be >= 16")
    sets, expect = [], []
    for i, d in enumerate(raw.get("sets", [])):
        if not isinstance(d, dict):
            raise ConfigError("each set must be a table", f"sets[{i}]")
        body = {k: v for k, v in d.items() if not k.startswith("expect_")}
        try:
            sets.append(CompactSetSpec.from_dict(body))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad set spec: {exc}", f"sets[{i}]") from exc
        expect.append({k[len("expect_"):]: v for k, v in d.items() if k.startswith("expect_")})
    corpus = raw.get("corpus", {})
    if not isinstance(corpus, dict) or set(corpus) - CORPUS_KEYS:
        raise ConfigError(f"corpus accepts only {sorted(CORPUS_KEYS)}", "corpus")
    params = raw.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("must be a table", "params")
    return ExperimentConfig(
        scenario=scenario, resolution=res, refine=refine,
        seed=_typed(raw, "seed", int, 0),
        out=_typed(raw, "out", str, "pshlab_run"),
        a=_typed(raw, "a", float, 2.0, lambda v: v > 1, "must exceed 1"),
        k=_typed(raw, "k", int, 128, lambda v: v >= 32, "must be >= 32"),
        tol=_typed(raw, "tol", float, 0.03, lambda v: v > 0, "must be positive"),
        workers=_typed(raw, "workers", int, 1, lambda v: v >= 1, "must be >= 1"),
        sets=tuple(sets), expect=tuple(expect) if any(expect) else (), corpus=dict(corpus), params=dict(params))


def load_config(path: str | Path, scenarios=None) -> ExperimentConfig:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"no such file {path}", "config") from exc
    except tomllib.TOMLDecodeError as exc:
        # the decoder message carries the line and column
        raise ConfigError(str(exc), "config") from exc
    return parse_config(raw, scenarios)

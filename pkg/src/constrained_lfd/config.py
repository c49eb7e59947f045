"""Run configuration: one JSON or TOML file plus ``section.key=value`` overrides."""

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .demogen import DemoGenConfig
from .errors import InvalidConfigError
from .rl.dqn import TrainConfig

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

SAMPLING_MODES = ("lattice", "random")


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs beyond its input files.

    Defaults reproduce the reference training setup: grid step 2 mm,
    gamma 0.99, 200 episodes of at most 284 steps, mini-batches of 32.
    """

    train: TrainConfig = field(default_factory=TrainConfig)
    demogen: DemoGenConfig = field(default_factory=DemoGenConfig)
    delta: float = 0.002
    window: int = 10
    collision_penalty: float = -10.0
    reward_constant: float = 10.0
    sampling: str = "lattice"
    arm: str | None = None
    scene: str | None = None
    out: str | None = None

    def __post_init__(self):
        if not self.delta > 0:
            raise InvalidConfigError("grid step delta must be positive")
        if self.window < 1:
            raise InvalidConfigError("smoothing window must be at least 1")
        if self.sampling not in SAMPLING_MODES:
            raise InvalidConfigError(f"sampling must be one of {SAMPLING_MODES}")
        for name in ("arm", "scene"):
            p = getattr(self, name)
            if p is not None and not Path(p).is_file():
                raise InvalidConfigError(f"{name} file not found: {p}")

    @property
    def seed(self):
        return self.train.seed

    def with_seed(self, seed):
        """Same config with ``seed`` driving both training and demo generation."""
        return replace(self, train=replace(self.train, seed=int(seed)),
                       demogen=replace(self.demogen, seed=int(seed)))

    def to_dict(self):
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["train"] = self.train.to_dict()
        d["demogen"] = self.demogen.to_dict()
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise InvalidConfigError(f"unknown config keys: {sorted(unknown)}")
        if "train" in d:
            d["train"] = TrainConfig.from_dict(d["train"])
        if "demogen" in d:
            d["demogen"] = DemoGenConfig.from_dict(d["demogen"])
        return cls(**d)


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(doc, overrides):
    """Apply ``"train.alpha=1e-4"`` style assignments to a plain config dict."""
    doc = json.loads(json.dumps(doc))
    for item in overrides or ():
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise InvalidConfigError(f"override must look like key=value: {item!r}")
        parts = key.strip().split(".")
        node = doc
        for p in parts[:-1]:
            node = node.setdefault(p, {})
            if not isinstance(node, dict):
                raise InvalidConfigError(f"cannot set {key}: {p} is not a section")
        node[parts[-1]] = _parse_value(value.strip())
    return doc


def read_config_file(path):
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise InvalidConfigError(f"cannot read config {path}: {exc}") from None
    try:
        if path.suffix.lower() == ".toml":
            return tomllib.loads(raw.decode("utf-8"))
        return json.loads(raw)
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise InvalidConfigError(f"{path}: {exc}") from None


def load_config(path=None, overrides=(), seed=None):
    """Defaults, then the file at ``path``, then ``overrides``, then ``seed``."""
    doc = RunConfig().to_dict()
    if path is not None:
        for k, v in read_config_file(path).items():
            if isinstance(v, dict) and isinstance(doc.get(k), dict):
                doc[k].update(v)
            else:
                doc[k] = v
    doc = apply_overrides(doc, overrides)
    try:
        cfg = RunConfig.from_dict(doc)
    except TypeError as exc:
        raise InvalidConfigError(str(exc)) from None
    return cfg.with_seed(seed) if seed is not None else cfg

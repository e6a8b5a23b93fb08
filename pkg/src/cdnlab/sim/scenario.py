"""Scenario description and its flat ``key = value`` file format."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields

from cdnlab.iridium.ring import F_POLICIES

PROTOCOLS = ("iridium", "chord")
POPULARITY = ("uniform", "zipf")
LATENCY_MODELS = ("constant", "uniform")


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    protocol: str = "iridium"
    N: int = 256
    m: int = 32
    p: int = 2
    q: int = 3
    f_policy: str = "sqrt"
    keys: int = 1000
    popularity: str = "uniform"
    zipf_s: float = 1.0
    lookup_rate: float = 10.0
    lookups: int = 0  # end the run after this many lookups; 0 means no cap
    join_rate: float = 0.0
    leave_rate: float = 0.0
    fail_rate: float = 0.0
    super_leave_rate: float = 0.0
    super_fail_rate: float = 0.0
    supernode_fail_prob: float = 0.0
    latency: str = "constant"
    latency_low: float = 1.0
    latency_high: float = 1.0
    timeout_factor: float = 5.0
    jitter: float = 10.0
    refresh_interval: float = 0.0  # soft-state refresh round period; 0 disables
    duration: float = 1000.0
    seed: int = 0

    def __post_init__(self):
        problems = validate(self)
        if problems:
            raise ScenarioError("; ".join(problems))

    @property
    def churn_rate(self) -> float:
        return (self.join_rate + self.leave_rate + self.fail_rate
                + self.super_leave_rate + self.super_fail_rate)

    @property
    def timeout(self) -> float:
        return self.timeout_factor * self.latency_high

    def replace(self, **changes) -> Scenario:
        return dataclasses.replace(self, **changes)

    def with_overrides(self, pairs) -> Scenario:
        """Apply ``key=value`` strings (or an already split mapping)."""
        if isinstance(pairs, dict):
            items = pairs.items()
        else:
            items = [_split(text, "override") for text in pairs]
        return self.replace(**{k: _convert(k, v) for k, v in items})

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def validate(s: Scenario) -> list[str]:
    out = []
    if s.protocol not in PROTOCOLS:
        out.append(f"protocol must be one of {PROTOCOLS}")
    if s.popularity not in POPULARITY:
        out.append(f"popularity must be one of {POPULARITY}")
    if s.latency not in LATENCY_MODELS:
        out.append(f"latency must be one of {LATENCY_MODELS}")
    if s.f_policy not in F_POLICIES:
        out.append(f"f_policy must be one of {sorted(F_POLICIES)}")
    if not 1 <= s.m <= 160:
        out.append("m must lie in 1..160")
    elif not 1 <= s.N <= (1 << s.m) // 2:
        out.append("N must lie in 1..2^(m-1)")
    if s.p < 1 or s.q < 1:
        out.append("p and q must be >= 1")
    if s.keys < 0 or s.lookups < 0:
        out.append("keys and lookups must be >= 0")
    rates = (s.lookup_rate, s.join_rate, s.leave_rate, s.fail_rate,
             s.super_leave_rate, s.super_fail_rate, s.zipf_s, s.jitter,
             s.refresh_interval)
    if any(r < 0 for r in rates):
        out.append("rates must be >= 0")
    if not 0 <= s.supernode_fail_prob < 1:
        out.append("supernode_fail_prob must lie in [0, 1)")
    if s.latency_low < 0 or s.latency_high < s.latency_low:
        out.append("latency range must satisfy 0 <= low <= high")
    if s.latency == "constant" and s.latency_low != s.latency_high:
        out.append("constant latency needs latency_low == latency_high")
    if s.timeout_factor <= 0:
        out.append("timeout_factor must be positive")
    if not s.duration > 0:
        out.append("duration must be positive")
    if s.seed < 0:
        out.append("seed must be nonnegative")
    return out


_TYPES = {f.name: f.type for f in fields(Scenario)}


def _convert(key: str, raw):
    if key not in _TYPES:
        raise ScenarioError(f"unknown scenario key {key!r}")
    kind = _TYPES[key]
    if not isinstance(raw, str):
        return raw
    raw = raw.strip()
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
    except ValueError:
        raise ScenarioError(f"{key}: cannot read {raw!r} as {kind}") from None
    return raw


def _split(text: str, where: str) -> tuple[str, str]:
    if "=" not in text:
        raise ScenarioError(f"{where}: expected key=value, got {text!r}")
    key, value = text.split("=", 1)
    return key.strip(), value.strip()


def parse_scenario(text: str, base: Scenario | None = None) -> Scenario:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, value = _split(line, f"line {lineno}")
        if key in values:
            raise ScenarioError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = _convert(key, value)
        except ScenarioError as exc:
            raise ScenarioError(f"line {lineno}: {exc}") from None
    return (base or Scenario()).replace(**values)


def dump_scenario(s: Scenario) -> str:
    return "".join(f"{k} = {v}\n" for k, v in s.to_dict().items())


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())

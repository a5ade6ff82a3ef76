"""Run configuration and machine-readable reports.

A report body is a plain JSON value built only from the operation, its
inputs, the configuration and the findings, so equal runs give
byte-identical bodies.  Wall-clock runtime is kept beside the body.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields

from . import __version__


@dataclass(frozen=True)
class RunConfig:
    stage_budget: int = 4
    name_cap: int = 2
    depth_cap: int = 6
    level_cap: int = 4
    poset_cap: int = 3
    pool: str | None = None
    format: str = "json"
    seed: int = 0

    def __post_init__(self):
        for f in ("stage_budget", "name_cap", "depth_cap", "level_cap", "poset_cap"):
            if getattr(self, f) <= 0:
                raise ValueError(f"{f} must be positive")
        if self.format not in ("json", "text"):
            raise ValueError(f"unknown output format {self.format}")

    @classmethod
    def load(cls, path: str | None = None, **overrides) -> "RunConfig":
        """Defaults, then the JSON config file, then non-None overrides."""
        values = {}
        if path:
            with open(path) as fh:
                values.update(json.load(fh))
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        values.update({k: v for k, v in overrides.items() if v is not None and k in known})
        return cls(**values)

    def as_dict(self) -> dict:
        return asdict(self)


def canonical_json(value) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(value) -> str:
    return hashlib.sha256(canonical_json(value).encode()).hexdigest()[:16]


# Verdicts that answer the question a command asks.  They are reported but
# never make a run fail; every other False verdict is a failed check.
OUTCOMES = frozenset({
    "satisfied", "transitive", "instance_holds", "schema_holds", "imh_holds", "imh_differs",
    "agree_on_pool", "globally_covers", "ground_axiom",
})


@dataclass
class Report:
    operation: str
    inputs: dict
    config: dict
    findings: list = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)
    runtime: float = 0.0

    @property
    def ok(self) -> bool:
        return all(v is not False for k, v in self.verdicts.items() if k not in OUTCOMES)

    def body(self) -> dict:
        return {
            "operation": self.operation,
            "inputs_digest": digest(self.inputs),
            "config_digest": digest(self.config),
            "inputs": self.inputs,
            "findings": self.findings,
            "verdicts": self.verdicts,
            "version": __version__,
        }

    def body_json(self) -> str:
        return json.dumps(self.body(), sort_keys=True, indent=2, ensure_ascii=False)

    def to_json(self, with_runtime: bool = True) -> str:
        out = self.body()
        if with_runtime:
            out = dict(out, runtime_seconds=round(self.runtime, 3))
        return json.dumps(out, sort_keys=True, indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        lines = [f"{self.operation}  (inputs {digest(self.inputs)}, config {digest(self.config)})"]
        for name, verdict in sorted(self.verdicts.items()):
            lines.append(f"  {name}: {_plain(verdict)}")
        for item in self.findings:
            if isinstance(item, dict):
                lines.append("  - " + ", ".join(f"{k}={_plain(v)}" for k, v in item.items()))
            else:
                lines.append(f"  - {_plain(item)}")
        lines.append(f"  runtime {self.runtime:.3f}s")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str, with_runtime: bool = True) -> str:
        if fmt == "text":
            return self.to_text()
        return self.to_json(with_runtime) + "\n"


def _plain(v):
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_plain(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_plain(x)}" for k, x in v.items()) + "}"
    return "; ".join(str(v).strip().splitlines())

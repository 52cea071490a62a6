"""Run configuration and named tolerances shared by ``verify`` and the CLI."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace

DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class Tolerances:
    algebra: float = 1e-10
    spectral: float = 1e-8
    integrality: float = 1e-6
    symmetry: float = 1e-9
    grad_rel: float = 1e-5
    fd_step: float = 1e-3
    barta_fd: float = 1e-2
    hessian: float = 1e-3
    growth_rel: float = 0.05
    threshold: float = 0.1
    consistency: float = 1e-9

    def updated(self, overrides: dict[str, float]) -> "Tolerances":
        known = {f.name for f in fields(self)}
        bad = sorted(set(overrides) - known)
        if bad:
            raise KeyError(f"unknown tolerance(s) {bad}; valid names: {sorted(known)}")
        return replace(self, **{k: float(v) for k, v in overrides.items()})


def parse_tol(items) -> dict[str, float]:
    """``['name=1e-8', ...]`` to a dict."""
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise ValueError(f"--tol expects name=value, got {item!r}")
        out[name.strip()] = float(value)
    return out


@dataclass(frozen=True)
class RunConfig:
    command: str
    domain: str | None = None
    radius: float | None = None
    seed: int = DEFAULT_SEED
    tolerances: Tolerances = field(default_factory=Tolerances)
    output: str = "-"
    format: str = "json"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError("seed must be unsigned")
        if self.format not in ("json", "csv", "pretty"):
            raise ValueError(f"unknown format {self.format!r}")

    def as_dict(self):
        return asdict(self)

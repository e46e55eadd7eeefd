"""Run configuration and the single home for check tolerances."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace

from .grid import SampleGrid1D


@dataclass(frozen=True)
class Tolerances:
    """Default pass/fail tolerances for every check.

    Each check records the tolerance it used, so reports are reproducible.
    """

    purity_rel: float = 1e-3          # |2*pi*hbar*int W^2 - 1|
    norm_abs: float = 1e-4            # |int W - 1|
    orthogonality_abs: float = 1e-4   # multiplied by 1/(2*pi*hbar)
    reconstruct_purity_rel: float = 1e-3
    anchor_min_marginal: float = 1e-8
    wavefunction_norm: float = 1e-9
    superpose_orthogonality: float = 1e-8
    hermitian_residual: float = 1e-10
    decay_ratio: float = 1e-10
    factorizable_residual: float = 0.1

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"tolerance {f.name} must be positive")


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class RunConfig:
    hbar: float = 1.0
    grid: SampleGrid1D = field(default_factory=lambda: SampleGrid1D(-8.0, 1.0 / 16, 256))
    tolerances: Tolerances = DEFAULT_TOLERANCES
    seed: int = 42
    oracle_n: int = 32

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        if not 8 <= self.oracle_n <= 48 or self.oracle_n % 2:
            raise ValueError("oracle_n must be an even integer in [8, 48]")

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        cfg = cls()
        kw = {}
        if "hbar" in data:
            kw["hbar"] = float(data["hbar"])
        if "grid" in data:
            g = data["grid"]
            kw["grid"] = SampleGrid1D(float(g["x0"]), float(g["dx"]), int(g["n"]))
        if "tolerances" in data:
            known = {f.name for f in fields(Tolerances)}
            unknown = set(data["tolerances"]) - known
            if unknown:
                raise ValueError(f"unknown tolerance names: {sorted(unknown)}")
            kw["tolerances"] = replace(cfg.tolerances, **{k: float(v) for k, v in data["tolerances"].items()})
        if "seed" in data:
            kw["seed"] = int(data["seed"])
        if "oracle_n" in data:
            kw["oracle_n"] = int(data["oracle_n"])
        return replace(cfg, **kw)

    @classmethod
    def load(cls, path) -> "RunConfig":
        with open(path) as fh:
            return cls.from_mapping(json.load(fh))

    def to_dict(self) -> dict:
        return {
            "hbar": self.hbar,
            "grid": self.grid.to_dict(),
            "tolerances": asdict(self.tolerances),
            "seed": self.seed,
            "oracle_n": self.oracle_n,
        }

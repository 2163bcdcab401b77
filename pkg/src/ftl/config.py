"""Experiment configuration: dataclasses plus the INI config format.

The on-disk format is flat INI (``[section]`` headers, ``key = value``
lines, no nesting).  Unknown sections or keys are hard errors so that
typos surface immediately.  Lists are comma separated.
"""
from __future__ import annotations

import configparser
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .noise import (
    CZ_LAYER_NS_DYNAMICS,
    DEFAULT_PAULI_ERROR,
    DEFAULT_SQ_LAYER_NS,
    DEFAULT_T1_US,
    NoiseModel,
)


@dataclass
class LatticeConfig:
    rows: int = 3
    cols: int = 6


@dataclass
class DriveConfig:
    b_radius: float = 0.0
    periods: int = 20


@dataclass
class DisorderConfig:
    realizations: int = 24
    master_seed: int = 20240801


@dataclass
class NoiseConfig:
    enabled: bool = False
    t1_us: float = DEFAULT_T1_US
    t2_us: float | None = None  # required whenever noise is enabled
    sq_layer_ns: float = DEFAULT_SQ_LAYER_NS
    cz_layer_ns: float = CZ_LAYER_NS_DYNAMICS
    ep_sq: float = DEFAULT_PAULI_ERROR["sq"]
    ep_cz: float = DEFAULT_PAULI_ERROR["cz"]
    ep_cz_idle: float = DEFAULT_PAULI_ERROR["cz_idle"]
    trajectories: int = 24
    readout_f0: float | None = None
    readout_f1: float | None = None

    def build_model(self) -> NoiseModel:
        if self.t2_us is None:
            raise ValueError(
                "noise.t2_us must be set explicitly when noise is enabled "
                "(no published default exists for the spin-echo T2)"
            )
        readout = None
        if self.readout_f0 is not None or self.readout_f1 is not None:
            if self.readout_f0 is None or self.readout_f1 is None:
                raise ValueError("set both readout_f0 and readout_f1 or neither")
        return NoiseModel(
            t2_us=self.t2_us,
            t1_us=self.t1_us,
            sq_layer_ns=self.sq_layer_ns,
            cz_layer_ns=self.cz_layer_ns,
            pauli_error={
                "sq": self.ep_sq,
                "cz": self.ep_cz,
                "cz_idle": self.ep_cz_idle,
            },
            readout=readout,
            enabled=self.enabled,
        )


@dataclass
class ObservablesConfig:
    # tokens: "zl" (all logical Z), "xl" (all logical X), "sz" (every sigma_z)
    strings: tuple[str, ...] = ("zl", "xl")


@dataclass
class TeeConfig:
    division: str = "both"  # four | six | both | custom
    # custom regions as 1-based qubit labels
    region_a: tuple[int, ...] = ()
    region_b: tuple[int, ...] = ()
    region_c: tuple[int, ...] = ()
    quench_periods: int = 0


@dataclass
class SweepConfig:
    b_values: tuple[float, ...] = (0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 3.0)
    periods: int = 7  # n = 0..7 keeps the subharmonic frequency on-grid


@dataclass
class LifetimeConfig:
    sizes: tuple[int, ...] = (6, 9)  # qubit counts of 3 x k lattices
    horizon: int = 10_000
    threshold: float = 0.5
    realizations: int = 200


@dataclass
class SynthRunConfig:
    target: str = "zz"  # "zz" or "zzzz"
    angle: float = 0.37
    population: int = 12
    initial_depth: int = 2
    depth_step: int = 1
    generations: int = 10
    max_iters: int = 400
    seed: int = 7
    loss_form: str = "real"
    name: str = "synth"


@dataclass
class OutputConfig:
    directory: str = "out"
    formats: tuple[str, ...] = ("csv",)  # csv plus optional "svg"


@dataclass
class ExperimentConfig:
    lattice: LatticeConfig = field(default_factory=LatticeConfig)
    drive: DriveConfig = field(default_factory=DriveConfig)
    disorder: DisorderConfig = field(default_factory=DisorderConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    observables: ObservablesConfig = field(default_factory=ObservablesConfig)
    tee: TeeConfig = field(default_factory=TeeConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    lifetime: LifetimeConfig = field(default_factory=LifetimeConfig)
    synth: SynthRunConfig = field(default_factory=SynthRunConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def validate(self) -> None:
        if self.drive.periods < 0:
            raise ValueError("drive.periods must be >= 0")
        if self.drive.b_radius < 0:
            raise ValueError("drive.b_radius must be >= 0")
        if self.disorder.realizations < 1:
            raise ValueError("disorder.realizations must be >= 1")
        if self.noise.enabled and self.noise.trajectories < 1:
            raise ValueError("noise.trajectories must be >= 1")
        if list(self.sweep.b_values) != sorted(self.sweep.b_values):
            raise ValueError("sweep.b_values must be sorted ascending")
        if not 0.0 < self.lifetime.threshold < 1.0:
            raise ValueError("lifetime.threshold must lie in (0, 1)")
        for n in self.lifetime.sizes:
            if n % 3 != 0 or n < 6:
                raise ValueError(
                    f"lifetime size {n} is not a 3 x k lattice qubit count"
                )
        for tok in self.observables.strings:
            if tok not in ("zl", "xl", "sz"):
                raise ValueError(f"unknown observable token {tok!r}")
        if self.tee.division not in ("four", "six", "both", "custom"):
            raise ValueError(f"unknown tee.division {self.tee.division!r}")
        if self.tee.division == "custom" and not (
            self.tee.region_a and self.tee.region_b and self.tee.region_c
        ):
            raise ValueError("custom tee division needs region_a/b/c")
        if self.synth.target not in ("zz", "zzzz"):
            raise ValueError(f"unknown synth.target {self.synth.target!r}")
        for fmt in self.output.formats:
            if fmt not in ("csv", "svg"):
                raise ValueError(f"unknown output format {fmt!r}")


_SECTIONS = {
    "lattice": LatticeConfig,
    "drive": DriveConfig,
    "disorder": DisorderConfig,
    "noise": NoiseConfig,
    "observables": ObservablesConfig,
    "tee": TeeConfig,
    "sweep": SweepConfig,
    "lifetime": LifetimeConfig,
    "synth": SynthRunConfig,
    "output": OutputConfig,
}


def _parse_value(raw: str, kind, key: str):
    raw = raw.strip()
    origin = getattr(kind, "__origin__", None)
    if kind is bool:
        low = raw.lower()
        if low in ("true", "yes", "1", "on"):
            return True
        if low in ("false", "no", "0", "off"):
            return False
        raise ValueError(f"cannot parse boolean {key} = {raw!r}")
    if kind is int:
        return int(raw)
    if kind is float:
        return float(raw)
    if kind is str:
        return raw
    if kind == float | None:
        return None if raw.lower() in ("", "none") else float(raw)
    if origin is tuple:
        inner = kind.__args__[0]
        if not raw:
            return ()
        return tuple(_parse_value(tok, inner, key) for tok in raw.split(","))
    raise ValueError(f"unsupported config field type for {key}")


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse an INI experiment file; unknown sections or keys are errors."""
    path = Path(path)
    if path.suffix == ".json":
        return config_from_manifest(path)
    parser = configparser.ConfigParser(interpolation=None)
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    cfg = ExperimentConfig()
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ValueError(f"unknown config section [{section}]")
        target = getattr(cfg, section)
        known = {f.name: f.type for f in fields(target)}
        types = _resolved_types(type(target))
        for key, raw in parser.items(section):
            if key not in known:
                raise ValueError(f"unknown key {key!r} in section [{section}]")
            setattr(target, key, _parse_value(raw, types[key], f"{section}.{key}"))
    cfg.validate()
    return cfg


def _resolved_types(cls) -> dict:
    import typing

    hints = typing.get_type_hints(cls)
    return {name: hints[name] for name in hints}


def config_to_dict(cfg: ExperimentConfig) -> dict:
    return {name: asdict(getattr(cfg, name)) for name in _SECTIONS}


def config_from_dict(data: dict) -> ExperimentConfig:
    cfg = ExperimentConfig()
    for section, cls in _SECTIONS.items():
        if section not in data:
            continue
        payload = dict(data[section])
        target = getattr(cfg, section)
        for f in fields(cls):
            if f.name in payload:
                value = payload[f.name]
                if isinstance(value, list):
                    value = tuple(value)
                setattr(target, f.name, value)
            payload.pop(f.name, None)
        if payload:
            raise ValueError(f"unknown keys in manifest section {section}: {sorted(payload)}")
    cfg.validate()
    return cfg


def config_from_manifest(path: str | Path) -> ExperimentConfig:
    """Rebuild the full configuration from a run manifest."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if "config" not in doc:
        raise ValueError("manifest carries no 'config' block")
    return config_from_dict(doc["config"])

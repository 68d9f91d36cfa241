"""Run configuration: flat ``key = value`` files with ``#`` comments."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from .assembly import CONVOLUTION_METHODS, SHIFT_NORMS
from .grid import LatticeSpec
from .mss import INIT_MODES, CouplingSpec, HartreeSystem, Tolerances
from .potentials import HarmonicPotential, InvalidParameterError, YukawaPotential


class ConfigError(ValueError):
    pass


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_kappas(text: str) -> tuple[float, ...]:
    parts = [p for p in text.replace(",", " ").split()]
    return tuple(float(p) for p in parts)


def _parse_init(text: str) -> str:
    text = text.strip()
    if text in ("uniform", "gaussian") or text.startswith("from-file:"):
        return text
    raise ValueError(f"init must be one of {INIT_MODES} (from-file:<path>)")


@dataclass
class RunConfig:
    side_length: float = 1.0
    nodes: int = 129
    mass1: float = 1.0
    mass2: float = 1.0
    trap1_x: float | None = None
    trap1_y: float | None = None
    trap1_strength: float = 1e5
    trap2_x: float | None = None
    trap2_y: float | None = None
    trap2_strength: float = 1e3
    screening: float = 1e2
    regularization: float = 1e-1
    theta1: float = 0.0
    theta2: float = 0.0
    kappa: tuple[float, ...] = (0.0, 0.5, 2.0, 10.0, 50.0)
    pm_tol: float = 1e-10
    mss_tol: float = 1e-8
    pm_max_iter: int = 200_000
    mss_max_iter: int = 10_000
    mixing: float = 1.0
    shift: str = "row"
    init: str = "gaussian"
    convolution: str = "fast"
    threads: int = 1
    output_dir: str = "results"
    timing: bool = True
    figures: bool = True
    source: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        # trap centers default to the middle of the box
        half = self.side_length / 2
        for name in ("trap1_x", "trap1_y", "trap2_x", "trap2_y"):
            if getattr(self, name) is None:
                setattr(self, name, half)

    def lattice(self) -> LatticeSpec:
        return LatticeSpec(self.side_length, self.nodes)

    def system(self) -> HartreeSystem:
        return HartreeSystem(
            self.lattice(),
            HarmonicPotential((self.trap1_x, self.trap1_y), self.trap1_strength),
            HarmonicPotential((self.trap2_x, self.trap2_y), self.trap2_strength),
            YukawaPotential(self.screening, self.regularization),
            convolution=self.convolution)

    def couplings(self, kappa: float) -> CouplingSpec:
        return CouplingSpec(self.theta1, self.theta2, kappa, self.mass1, self.mass2)

    def tolerances(self) -> Tolerances:
        return Tolerances(self.pm_tol, self.mss_tol, self.pm_max_iter, self.mss_max_iter,
                          self.mixing, self.shift)

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d.pop("source")
        d["kappa"] = list(self.kappa)
        return d

    def validate(self) -> "RunConfig":
        """Raise :class:`ConfigError` naming the offending key."""
        checks = [
            ("side_length", lambda: LatticeSpec(self.side_length, 4)),
            ("nodes", lambda: LatticeSpec(1.0, self.nodes)),
            ("trap1_strength", lambda: HarmonicPotential((0, 0), self.trap1_strength)),
            ("trap2_strength", lambda: HarmonicPotential((0, 0), self.trap2_strength)),
            ("regularization", lambda: YukawaPotential(0.0, self.regularization)),
            ("screening", lambda: YukawaPotential(self.screening, 1.0)),
            ("theta1", lambda: CouplingSpec(theta1=self.theta1)),
            ("theta2", lambda: CouplingSpec(theta2=self.theta2)),
            ("mass1", lambda: CouplingSpec(mass1=self.mass1)),
            ("mass2", lambda: CouplingSpec(mass2=self.mass2)),
            ("pm_tol", lambda: Tolerances(pm=self.pm_tol)),
            ("mss_tol", lambda: Tolerances(mss=self.mss_tol)),
            ("mixing", lambda: Tolerances(mixing=self.mixing)),
            ("shift", lambda: Tolerances(shift_norm=self.shift)),
        ]
        for key, check in checks:
            try:
                check()
            except (ValueError, InvalidParameterError) as exc:
                raise self._error(key, str(exc)) from None
        if not self.kappa:
            raise self._error("kappa", "kappa list is empty")
        if any(k < 0 for k in self.kappa):
            raise self._error("kappa", "kappa values must be nonnegative")
        if any(b <= a for a, b in zip(self.kappa, self.kappa[1:])):
            raise self._error("kappa", "kappa list must be strictly increasing")
        if self.convolution not in CONVOLUTION_METHODS:
            raise self._error("convolution", f"must be one of {CONVOLUTION_METHODS}")
        if self.shift not in SHIFT_NORMS:
            raise self._error("shift", f"must be one of {SHIFT_NORMS}")
        if self.init.startswith("from-file:") and not Path(self.init.split(":", 1)[1]).is_file():
            raise self._error("init", f"start state file {self.init.split(':', 1)[1]} not found")
        for key in ("pm_max_iter", "mss_max_iter", "threads"):
            if getattr(self, key) < 1:
                raise self._error(key, "must be at least 1")
        return self

    def _error(self, key: str, message: str) -> ConfigError:
        where = self.source.get(key)
        return ConfigError(f"{where + ': ' if where else ''}{key}: {message}")


_CONVERTERS = {
    "side_length": float, "nodes": int, "mass1": float, "mass2": float,
    "trap1_x": float, "trap1_y": float, "trap1_strength": float,
    "trap2_x": float, "trap2_y": float, "trap2_strength": float,
    "screening": float, "regularization": float, "theta1": float, "theta2": float,
    "kappa": _parse_kappas, "pm_tol": float, "mss_tol": float,
    "pm_max_iter": int, "mss_max_iter": int, "mixing": float, "shift": str.strip,
    "init": _parse_init, "convolution": str.strip, "threads": int,
    "output_dir": str.strip, "timing": _parse_bool, "figures": _parse_bool,
}

KEYS = tuple(_CONVERTERS)


def _convert(key: str, value: str, where: str):
    if key not in _CONVERTERS:
        raise ConfigError(f"{where}: unknown key {key!r}")
    try:
        return _CONVERTERS[key](value)
    except ValueError as exc:
        raise ConfigError(f"{where}: {key}: cannot parse {value.strip()!r} ({exc})") from None


def read_config_file(path) -> tuple[dict, dict]:
    """Return ``(values, source)`` where ``source`` maps keys to ``file:line``."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"config file {path} not found") from None
    values, source = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{path}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in values:
            raise ConfigError(f"{where}: duplicate key {key!r}")
        values[key] = _convert(key, value, where)
        source[key] = where
    return values, source


def parse_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Build a validated :class:`RunConfig` from a file plus string overrides."""
    values, source = read_config_file(path) if path is not None else ({}, {})
    for key, value in (overrides or {}).items():
        values[key] = _convert(key, str(value), "override")
        source[key] = "override"
    return RunConfig(**values, source=source).validate()

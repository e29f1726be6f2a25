"""Scenario configuration: flat key=value files with '#' comments.

Defaults put the system in the natural unit system g = 1, lambda = 0.1
(so Delta = 10, chi = 0.1) with omega_c = 100 and a drive amplitude
epsilon = 0.05.  lambda = 0.1 follows the reference operating point used
throughout; the remaining values are chosen to keep all frequency scales
well separated so rotating-wave comparisons stay meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .hilbert import SystemParams

__all__ = ["ConfigError", "ScenarioConfig", "parse_config", "SCENARIOS"]

SCENARIOS = ("fig2a", "fig2b", "fig2c", "fig2d", "fig4", "readout", "custom")


class ConfigError(ValueError):
    """Malformed configuration; carries the offending line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str = "fig2a"
    g: float = 1.0
    lam: float = 0.1
    omega_c: float = 100.0
    omega_q: Optional[float] = None          # derived from lambda unless given
    epsilon: complex = 0.05
    drive_form: str = "rwa"                  # rwa | cosine
    phase_correction: bool = True
    initial: Optional[str] = None            # dressed | bare (excited-branch start)
    basis: str = "exact"                     # exact | first_order dressed targets
    sweep_start: Optional[float] = None
    sweep_stop: Optional[float] = None
    sweep_points: Optional[int] = None
    sweep_values: Optional[tuple[float, ...]] = None
    alpha_sq: float = 4.0                    # target photon number where one is fixed
    eta_abs: Optional[float] = None          # qubit drive strength; default 0.05*omega_q
    eta_phase: float = 0.0
    omega_drive: Optional[float] = None      # qubit drive frequency override
    time_points: int = 400
    n_max: Optional[int] = None              # cavity truncation override
    dt: Optional[float] = None               # integrator step override
    workers: int = 1
    check_convergence: bool = True
    out: Optional[str] = None

    def system_params(self, lam_override: Optional[float] = None) -> SystemParams:
        """Resolve (g, lambda, omega_c[, omega_q]) into SystemParams."""
        lam = self.lam if lam_override is None else lam_override
        if self.omega_q is not None and lam_override is None:
            return SystemParams(omega_c=self.omega_c, omega_q=self.omega_q, g=self.g)
        return SystemParams.from_lambda(g=self.g, lam=lam, omega_c=self.omega_c)

    def sweep_grid(self, default: tuple[float, ...]) -> tuple[float, ...]:
        if self.sweep_values is not None:
            return self.sweep_values
        if self.sweep_start is not None or self.sweep_stop is not None:
            if None in (self.sweep_start, self.sweep_stop, self.sweep_points):
                raise ConfigError("sweep_start, sweep_stop and sweep_points must all be set")
            n = self.sweep_points
            step = (self.sweep_stop - self.sweep_start) / (n - 1)
            return tuple(self.sweep_start + i * step for i in range(n))
        return default


_BOOL = {"on": True, "true": True, "1": True, "yes": True,
         "off": False, "false": False, "0": False, "no": False}


def _parse_bool(value: str, key: str, line: int) -> bool:
    try:
        return _BOOL[value.lower()]
    except KeyError:
        raise ConfigError(f"{key} must be on/off, got {value!r}", line) from None


def _parse_choice(value: str, key: str, line: int, choices: tuple[str, ...]) -> str:
    if value not in choices:
        raise ConfigError(f"{key} must be one of {', '.join(choices)}; got {value!r}", line)
    return value


def parse_config(text: str) -> ScenarioConfig:
    """Parse key=value lines into a typed ScenarioConfig.

    Unknown keys, unparsable values and inconsistent derived quantities (an
    omega_q that contradicts the given lambda) are errors carrying the line
    number.  An empty file yields all defaults.
    """
    values: dict = {}
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key=value, got {line!r}", lineno)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not value:
            raise ConfigError(f"empty value for {key!r}", lineno)
        _apply_key(values, key, value, lineno)
        seen[key] = lineno

    cfg = ScenarioConfig(**values)
    if cfg.omega_q is not None and "lambda" in seen:
        derived = cfg.g / (cfg.omega_q - cfg.omega_c)
        if abs(derived - cfg.lam) > 1e-9 * max(1.0, abs(cfg.lam)):
            raise ConfigError(
                f"omega_q={cfg.omega_q:g} implies lambda={derived:g}, "
                f"contradicting lambda={cfg.lam:g}",
                seen["omega_q"],
            )
    return cfg


def _apply_key(values: dict, key: str, value: str, line: int) -> None:
    def as_float(v=value):
        try:
            return float(v)
        except ValueError:
            raise ConfigError(f"{key} must be a number, got {v!r}", line) from None

    def as_int(v=value):
        try:
            return int(v)
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {v!r}", line) from None

    if key == "scenario":
        values["scenario"] = _parse_choice(value, key, line, SCENARIOS)
    elif key == "g":
        values["g"] = as_float()
    elif key == "lambda":
        lam = as_float()
        if lam == 0.0:
            raise ConfigError("lambda must be nonzero", line)
        values["lam"] = lam
    elif key == "omega_c":
        values["omega_c"] = as_float()
    elif key == "omega_q":
        values["omega_q"] = as_float()
    elif key == "epsilon":
        try:
            values["epsilon"] = complex(value)
        except ValueError:
            raise ConfigError(f"epsilon must be a (complex) number, got {value!r}", line) from None
    elif key == "drive_form":
        values["drive_form"] = _parse_choice(value, key, line, ("rwa", "cosine"))
    elif key == "phase_correction":
        values["phase_correction"] = _parse_bool(value, key, line)
    elif key == "initial":
        values["initial"] = _parse_choice(value, key, line, ("dressed", "bare"))
    elif key == "basis":
        values["basis"] = _parse_choice(value, key, line, ("exact", "first_order"))
    elif key == "sweep_start":
        values["sweep_start"] = as_float()
    elif key == "sweep_stop":
        values["sweep_stop"] = as_float()
    elif key == "sweep_points":
        n = as_int()
        if n < 2:
            raise ConfigError("sweep_points must be >= 2", line)
        values["sweep_points"] = n
    elif key == "sweep_values":
        try:
            values["sweep_values"] = tuple(float(v) for v in value.split(",") if v.strip())
        except ValueError:
            raise ConfigError(f"sweep_values must be comma-separated numbers, got {value!r}", line) from None
    elif key == "alpha_sq":
        values["alpha_sq"] = as_float()
    elif key == "eta_abs":
        values["eta_abs"] = as_float()
    elif key == "eta_phase":
        values["eta_phase"] = as_float()
    elif key == "omega_drive":
        values["omega_drive"] = as_float()
    elif key == "time_points":
        values["time_points"] = as_int()
    elif key == "n_max":
        values["n_max"] = as_int()
    elif key == "dt":
        dt = as_float()
        if dt <= 0:
            raise ConfigError("dt must be positive", line)
        values["dt"] = dt
    elif key == "workers":
        w = as_int()
        if w < 1:
            raise ConfigError("workers must be >= 1", line)
        values["workers"] = w
    elif key == "check_convergence":
        values["check_convergence"] = _parse_bool(value, key, line)
    elif key == "out":
        values["out"] = value
    else:
        known = ", ".join(sorted(_KNOWN_KEYS))
        raise ConfigError(f"unknown key {key!r}; known keys: {known}", line)


_KNOWN_KEYS = {
    "scenario", "g", "lambda", "omega_c", "omega_q", "epsilon", "drive_form",
    "phase_correction", "initial", "basis", "sweep_start", "sweep_stop",
    "sweep_points", "sweep_values", "alpha_sq", "eta_abs", "eta_phase",
    "omega_drive", "time_points", "n_max", "dt", "workers",
    "check_convergence", "out",
}

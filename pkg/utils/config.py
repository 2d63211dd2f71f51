#!/usr/bin/env python3
"""
Run configuration
Resolves run settings from command-line flags, EPIKIT_* environment
variables (.env honoured), a flat key=value config file and built-in
defaults, in that order of precedence.
"""

import logging
import os
from dataclasses import asdict, dataclass, field, fields
from datetime import date, datetime
from typing import Any, Callable, Dict, List, Optional

from dotenv import load_dotenv

from models.params import DEFAULT_RECOVERY_RATE, FoiScaling, ModelParams
from models.registry import ModelFactory
from .errors import DomainError, InputError

logger = logging.getLogger(__name__)

ENV_PREFIX = "EPIKIT_"
CONFIG_ENV_VAR = "EPIKIT_CONFIG"
OUTPUT_FORMATS = ("csv", "json")
SWEEP_PARAMETERS = ("susceptible_pct", "infectious_pct", "r_c", "p_t", "population", "scenarios")


def parse_date(value: Any) -> Optional[date]:
    """Accept a date, ISO YYYY-MM-DD or DD/MM/YYYY text."""
    if value is None or isinstance(value, date):
        return value
    text = str(value).strip()
    if not text:
        return None
    for fmt in ("%Y-%m-%d", "%d/%m/%Y"):
        try:
            return datetime.strptime(text, fmt).date()
        except ValueError:
            continue
    raise ValueError(f"not a date: '{text}'")


def parse_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off", ""):
        return False
    raise ValueError(f"not a boolean: '{value}'")


def parse_float_list(value: Any) -> Optional[List[float]]:
    if value is None:
        return None
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    return [float(v) for v in str(value).replace(",", " ").split()]


def _optional(convert: Callable) -> Callable:
    def wrapped(value):
        if value is None or (isinstance(value, str) and not value.strip()):
            return None
        return convert(value)
    return wrapped


def _text(value: Any) -> str:
    return str(value).strip()


_CONVERTERS: Dict[str, Callable[[Any], Any]] = {
    "input": _optional(_text),
    "region": _optional(_text),
    "as_of": parse_date,
    "r0": _optional(float),
    "alpha2": float,
    "gamma": float,
    "alpha": float,
    "rc": float,
    "pt": float,
    "dt": float,
    "horizon": float,
    "population": float,
    "i0": float,
    "infectious": float,
    "susceptible": _optional(float),
    "eps_i": float,
    "eps_deriv": float,
    "foi_scaling": lambda v: FoiScaling.parse(v).value,
    "format": lambda v: _text(v).lower(),
    "out_dir": _text,
    "jobs": int,
    "k_max": int,
    "no_timestamp": parse_bool,
    "iso_dates": parse_bool,
    "calibrate_india": parse_bool,
    "model": lambda v: _text(v).lower(),
    "sweep": _optional(_text),
    "values": parse_float_list,
    "recovery_slope": float,
    "fatality_slope": float,
    "warnings_jsonl": _optional(_text),
    "normalized_out": _optional(_text),
}

# Keys that name where things go rather than what is computed.
_LOCATION_KEYS = ("out_dir", "warnings_jsonl", "normalized_out", "config_path", "verbose")


@dataclass
class RunConfig:
    """Effective settings for one command-line run."""
    subcommand: str = ""
    input: Optional[str] = None
    region: Optional[str] = None
    as_of: Optional[date] = None
    r0: Optional[float] = None
    alpha2: float = DEFAULT_RECOVERY_RATE
    gamma: float = 0.0
    alpha: float = 0.0
    rc: float = 1.0
    pt: float = 0.3
    dt: float = 0.1
    horizon: float = 365.0
    population: float = 1000.0
    i0: float = 10.0
    infectious: float = 10.0
    susceptible: Optional[float] = None
    eps_i: float = 1.0
    eps_deriv: float = 1e-3
    foi_scaling: str = FoiScaling.FRACTIONAL.value
    format: str = "csv"
    out_dir: str = "output"
    jobs: int = 1
    k_max: int = 20
    no_timestamp: bool = False
    iso_dates: bool = False
    calibrate_india: bool = False
    model: str = "sir"
    sweep: Optional[str] = None
    values: Optional[List[float]] = None
    recovery_slope: float = 0.002
    fatality_slope: float = 0.0005
    warnings_jsonl: Optional[str] = None
    normalized_out: Optional[str] = None
    config_path: Optional[str] = None
    verbose: bool = False
    sources: Dict[str, str] = field(default_factory=dict, repr=False)

    def validate(self) -> "RunConfig":
        """
        Check parameter domains and the output directory before any
        computation runs.

        Raises:
            DomainError: If a value is outside its domain or the output
                directory cannot be written
        """
        def require(ok: bool, message: str):
            if not ok:
                raise DomainError(message)

        require(self.rc >= 0, f"rc must be non-negative, got: {self.rc}")
        require(0.0 <= self.pt <= 1.0, f"pt must lie in [0, 1], got: {self.pt}")
        for name in ("alpha2", "gamma", "alpha"):
            value = getattr(self, name)
            require(value >= 0, f"{name} must be non-negative, got: {value}")
        if self.r0 is not None:
            require(self.r0 >= 0, f"r0 must be non-negative, got: {self.r0}")
        require(self.dt > 0, f"dt must be positive, got: {self.dt}")
        require(self.horizon > 0, f"horizon must be positive, got: {self.horizon}")
        require(self.population > 0, f"population must be positive, got: {self.population}")
        require(0.0 <= self.i0 <= self.population,
                f"i0 must lie in [0, {self.population:g}], got: {self.i0}")
        require(0.0 <= self.infectious <= self.population,
                f"infectious must lie in [0, {self.population:g}], got: {self.infectious}")
        if self.susceptible is not None:
            require(self.susceptible >= 0, f"susceptible must be non-negative, got: {self.susceptible}")
        require(self.eps_i > 0, f"eps_i must be positive, got: {self.eps_i}")
        require(self.eps_deriv > 0, f"eps_deriv must be positive, got: {self.eps_deriv}")
        require(self.format in OUTPUT_FORMATS,
                f"Unsupported format: {self.format}. Supported formats: {list(OUTPUT_FORMATS)}")
        require(self.jobs >= 1, f"jobs must be at least 1, got: {self.jobs}")
        require(self.k_max >= 1, f"k_max must be at least 1, got: {self.k_max}")
        require(ModelFactory.is_model_supported(self.model),
                f"Unsupported model: {self.model}. "
                f"Supported models: {ModelFactory.get_supported_models()}")
        if self.sweep is not None:
            require(self.sweep in SWEEP_PARAMETERS,
                    f"Unsupported sweep: {self.sweep}. Supported sweeps: {list(SWEEP_PARAMETERS)}")
        FoiScaling.parse(self.foi_scaling)

        try:
            os.makedirs(self.out_dir, exist_ok=True)
        except OSError as e:
            raise DomainError(f"Cannot create output directory {self.out_dir}: {e}")
        require(os.access(self.out_dir, os.W_OK), f"Output directory is not writable: {self.out_dir}")
        return self

    def model_params(self) -> ModelParams:
        """
        Model parameters implied by this config. When r0 is set, tau is
        calibrated as r0 * alpha2 and rc/pt are ignored.
        """
        common = dict(gamma=self.gamma, foi_scaling=self.foi_scaling, alpha_sis=self.alpha)
        if self.r0 is not None:
            return ModelParams.from_r0(self.r0, alpha2=self.alpha2, **common)
        return ModelParams(r_c=self.rc, p_t=self.pt, alpha2=self.alpha2, **common)

    def effective_parameters(self) -> Dict[str, Any]:
        """Every setting that influences results, for embedding in outputs."""
        data = {k: v for k, v in asdict(self).items()
                if k not in _LOCATION_KEYS and k != "sources"}
        if self.as_of is not None:
            data["as_of"] = self.as_of.isoformat()
        data["tau"] = self.model_params().tau
        return dict(sorted(data.items()))


def load_config_file(path: str) -> Dict[str, str]:
    """
    Read a flat key=value config file.

    Blank lines and lines starting with '#' are ignored. Keys are
    case-insensitive and may use dashes.

    Raises:
        InputError: If the file cannot be read or a line has no '='
    """
    values = {}
    try:
        with open(path, 'r', encoding='utf-8') as f:
            for lineno, raw in enumerate(f, 1):
                line = raw.strip()
                if not line or line.startswith('#'):
                    continue
                if '=' not in line:
                    raise InputError(f"{path}:{lineno}: expected key=value, got '{line}'")
                key, value = line.split('=', 1)
                values[_normalize_key(key)] = value.strip().strip('"').strip("'")
    except OSError as e:
        raise InputError(f"Cannot read config file {path}: {e}")
    return values


def load_env_settings() -> Dict[str, str]:
    """EPIKIT_* environment variables, after loading .env."""
    load_dotenv()
    values = {}
    for key in _CONVERTERS:
        raw = os.getenv(ENV_PREFIX + key.upper())
        if raw is not None:
            values[key] = raw
    return values


def _normalize_key(key: str) -> str:
    return key.strip().lower().replace('-', '_')


def _apply_soft(target: Dict[str, Any], values: Dict[str, Any], source: str,
                sources: Dict[str, str]) -> None:
    """Merge values, falling back to the existing value on bad input."""
    for key, raw in values.items():
        if key not in _CONVERTERS:
            logger.warning("Ignoring unknown setting '%s' from %s", key, source)
            continue
        try:
            target[key] = _CONVERTERS[key](raw)
            sources[key] = source
        except (ValueError, TypeError) as e:
            logger.warning("Invalid %s value '%s' from %s (%s), using %r",
                           key, raw, source, e, target.get(key))


def resolve_config(cli_values: Optional[Dict[str, Any]] = None, subcommand: str = "",
                   config_path: Optional[str] = None) -> RunConfig:
    """
    Build the effective RunConfig.

    Args:
        cli_values: Flag values; None entries mean "not given"
        subcommand: Subcommand name recorded in the config
        config_path: Config file; falls back to $EPIKIT_CONFIG

    Returns:
        Unvalidated RunConfig

    Raises:
        DomainError: If a command-line value cannot be converted
        InputError: If the config file cannot be read
    """
    defaults = RunConfig()
    settings = {f.name: getattr(defaults, f.name) for f in fields(RunConfig)
                if f.name in _CONVERTERS}
    sources = {key: "default" for key in settings}

    env_values = load_env_settings()
    config_path = config_path or os.getenv(CONFIG_ENV_VAR)
    if config_path:
        _apply_soft(settings, load_config_file(config_path), f"config file {config_path}", sources)
    _apply_soft(settings, env_values, "environment", sources)

    verbose = False
    for key, value in (cli_values or {}).items():
        if value is None:
            continue
        if key == "verbose":
            verbose = bool(value)
            continue
        key = _normalize_key(key)
        if key not in _CONVERTERS:
            continue
        try:
            settings[key] = _CONVERTERS[key](value)
        except (ValueError, TypeError) as e:
            raise DomainError(f"Invalid value for --{key.replace('_', '-')}: {value} ({e})")
        sources[key] = "command line"

    return RunConfig(subcommand=subcommand, config_path=config_path, verbose=verbose,
                     sources=sources, **settings)

"""Run configuration, validation, and CSV output with embedded provenance.

Configuration is a flat JSON file of key-value pairs; command-line flags
override file values.  Unknown keys are rejected.  Every CSV written by the
command-line tools starts with comment lines of the form::

    # command: run
    # config: {"K": 5, "N": 100000, ...}

The config line is the effective merged configuration of the physics fields
(execution-mode settings such as the thread count are deliberately left out
so that reruns at different thread counts stay byte-identical), serialized
as sorted single-line JSON; :func:`read_provenance` parses it back and
:meth:`RunConfig.from_dict` reloads it into an identical run.

All floating-point data fields are written with 9 significant digits.
"""
from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence

from .dynamics import DEFAULT_COUPLING, DEFAULT_TRANSITION_HZ, DEFAULT_WAVELENGTH_M, JcmParams
from .noise import NoiseParams


class ConfigError(ValueError):
    """Invalid configuration file, flag value, or parameter combination."""


@dataclass(frozen=True)
class RunConfig:
    """Merged physics configuration of one simulation command."""

    g: float = DEFAULT_COUPLING
    K: int = 5
    m: int = 1
    N: int = 100_000
    f: float = DEFAULT_TRANSITION_HZ
    wavelength: float = DEFAULT_WAVELENGTH_M
    p: float | None = None
    delta_e: float | None = None
    seed: int = 1
    samples: int = 40_000
    initial: str = "g012"
    record_stride: int = 100
    n_steps: int | None = None

    _FLOATS = ("g", "f", "wavelength", "p", "delta_e")
    _INTS = ("K", "m", "N", "seed", "samples", "record_stride", "n_steps")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls) if not f.name.startswith("_")}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        coerced = {}
        for key, val in data.items():
            if val is None:
                continue
            try:
                if key in cls._FLOATS:
                    val = float(val)
                elif key in cls._INTS:
                    ival = int(val)
                    if ival != float(val):
                        raise ValueError
                    val = ival
            except (TypeError, ValueError):
                raise ConfigError(f"config key {key!r}: cannot parse {val!r}") from None
            coerced[key] = val
        cfg = cls(**coerced)
        cfg.validate()
        return cfg

    def merged(self, overrides: dict) -> "RunConfig":
        """New config with non-None overrides applied."""
        data = self.to_dict()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig.from_dict(data)

    def validate(self) -> None:
        try:
            self.jcm_params()
            if self.p is not None and self.delta_e is not None:
                self.noise_params()
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.initial not in ("g012", "0plus", "g1"):
            raise ConfigError(
                f"initial must be one of g012, 0plus, g1 (got {self.initial!r})"
            )
        if self.record_stride < 1:
            raise ConfigError(f"record_stride must be >= 1 (got {self.record_stride})")
        if self.n_steps is not None and not 1 <= self.n_steps <= self.N:
            raise ConfigError(f"n_steps must lie in [1, N] (got {self.n_steps})")

    def jcm_params(self) -> JcmParams:
        return JcmParams(g=self.g, K=self.K, m=self.m, N=self.N,
                         f=self.f, wavelength=self.wavelength)

    def noise_params(self) -> NoiseParams:
        if self.p is None or self.delta_e is None:
            raise ConfigError("this command requires both p and delta_e")
        return NoiseParams(p=self.p, delta_e=self.delta_e,
                           master_seed=self.seed, M=self.samples)

    def to_dict(self) -> dict:
        return asdict(self)


def load_config_file(path: str | Path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return RunConfig.from_dict(data)


def fmt(value) -> str:
    """CSV field formatting: floats at 9 significant digits."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def write_csv(
    path: str | Path,
    header: Sequence[str],
    rows: Iterable[Sequence],
    command: str,
    config: RunConfig | None = None,
    extra_provenance: dict | None = None,
) -> None:
    """Write one provenance-stamped CSV file."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# command: {command}\n")
        if config is not None:
            fh.write("# config: "
                     + json.dumps(config.to_dict(), sort_keys=True) + "\n")
        for key in sorted(extra_provenance or {}):
            fh.write(f"# {key}: {json.dumps(extra_provenance[key])}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def read_provenance(path: str | Path) -> dict:
    """Parse the comment preamble of a CSV written by :func:`write_csv`."""
    out: dict = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            body = line[1:].strip()
            key, _, val = body.partition(":")
            key = key.strip()
            val = val.strip()
            if key == "config":
                out[key] = json.loads(val)
            elif key:
                try:
                    out[key] = json.loads(val)
                except json.JSONDecodeError:
                    out[key] = val
    return out


def read_csv_columns(path: str | Path) -> dict[str, list]:
    """Read a CSV written by :func:`write_csv` into named columns (floats
    where possible)."""
    cols: dict[str, list] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows:
        raise ConfigError(f"{path}: no CSV content found")
    header, data = rows[0], rows[1:]
    for j, name in enumerate(header):
        vals = []
        for r in data:
            try:
                vals.append(float(r[j]))
            except ValueError:
                vals.append(r[j])
        cols[name] = vals
    return cols

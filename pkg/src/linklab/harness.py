"""Configuration files, parameter sweeps and CSV output.

Config files are flat ``key = value`` text; ``#`` starts a comment.  Every
key is optional and missing ones fall back to the reference scenario:
150 m / 150 m IRS hops with exponent 2, a 200 m direct link with exponent
3.5, -30 dB reference loss, 180 kHz bandwidth, -173 dBm/Hz noise and a
10 dB outage threshold.
"""
from __future__ import annotations

import dataclasses
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from . import analytic, link
from .channel import FadingConfig, LinkGeometry, RadioConfig, transmit_snr

__all__ = [
    "ConfigError",
    "OUTPUTS",
    "VARIABLES",
    "SweepSpec",
    "ResultRow",
    "parse_config",
    "load_config",
    "apply_sweep_value",
    "run_sweep",
    "format_csv",
    "write_csv",
    "write_plot_stub",
]

VARIABLES = ("N", "K", "d1_split", "tx_power")
OUTPUTS = ("mc_capacity", "cap_bound", "mc_outage", "outage_clt", "outage_high_snr")
_PROBABILITIES = {"mc_outage", "outage_clt", "outage_high_snr"}

_FLOAT_KEYS = {
    "d1": "geom", "d2": "geom", "d3": "geom",
    "alpha1": "geom", "alpha2": "geom", "alpha3": "geom", "ref_loss_db": "geom",
    "k": "fading", "k1": "fading", "k2": "fading",
    "tx_power_dbm": "radio", "bandwidth_hz": "radio",
    "noise_psd_dbm_hz": "radio", "gamma_th_db": "radio",
}
_KEYS = set(_FLOAT_KEYS) | {"n_elements", "rayleigh_convention", "sweep.variable",
                            "sweep.values", "sweep.outputs", "samples", "seed"}


class ConfigError(ValueError):
    """Invalid configuration; ``key`` and ``line`` locate the problem when known."""

    def __init__(self, message, key=None, line=None, source=None):
        self.key = key
        self.line = line
        where = []
        if source is not None:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


@dataclass(frozen=True)
class SweepSpec:
    variable: str = "N"
    values: tuple = (8, 16, 32, 64)
    outputs: tuple = ("mc_capacity", "cap_bound")
    n_samples: int = 10_000
    seed: int = 2020

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise ValueError(f"sweep variable must be one of {VARIABLES}, got {self.variable!r}")
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ValueError("sweep values must be non-empty")
        if not all(math.isfinite(v) for v in values):
            raise ValueError("sweep values must be finite")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("sweep values must be strictly increasing")
        if self.variable == "N":
            if any(v != int(v) or v < 1 for v in values):
                raise ValueError("N sweep values must be positive integers")
            values = tuple(int(v) for v in values)
        if self.variable == "K" and any(v < 0 for v in values):
            raise ValueError("K sweep values must be >= 0")
        object.__setattr__(self, "values", values)
        unknown = set(self.outputs) - set(OUTPUTS)
        if unknown or not self.outputs:
            raise ValueError(f"sweep outputs must be a non-empty subset of {OUTPUTS}")
        # canonical column order, duplicates dropped
        object.__setattr__(self, "outputs", tuple(o for o in OUTPUTS if o in self.outputs))
        if int(self.n_samples) != self.n_samples or self.n_samples < link.MIN_SAMPLES:
            raise ValueError(f"samples must be an integer >= {link.MIN_SAMPLES}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        object.__setattr__(self, "n_samples", int(self.n_samples))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class ResultRow:
    """One sweep point: ``values[output] = (value, half_width)``."""

    sweep_value: float
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        if not math.isfinite(self.sweep_value):
            raise ValueError("sweep_value must be finite")
        for name, (value, hw) in self.values.items():
            if not (math.isfinite(value) and math.isfinite(hw) and hw >= 0):
                raise ValueError(f"{name}: non-finite value or negative half-width")
            if name in _PROBABILITIES and not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}: probability {value!r} outside [0, 1]")


def _parse_float(key, raw, lineno, source):
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {raw!r}", key, lineno, source) from None
    if not math.isfinite(value):
        raise ConfigError(f"{key}: value must be finite", key, lineno, source)
    return value


def _parse_int(key, raw, lineno, source):
    value = _parse_float(key, raw, lineno, source)
    if value != int(value):
        raise ConfigError(f"{key}: expected an integer, got {raw!r}", key, lineno, source)
    return int(value)


def _split_list(raw):
    return [item.strip() for item in raw.replace(";", ",").split(",") if item.strip()]


def parse_config(text: str, source=None):
    """Parse config text into ``(LinkGeometry, FadingConfig, RadioConfig, SweepSpec)``."""
    raw = {}
    lines = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected 'key = value', got {line.strip()!r}", None, lineno, source)
        key, value = (part.strip() for part in body.split("=", 1))
        key = key.lower()
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}", key, lineno, source)
        if key in raw:
            raise ConfigError(f"duplicate key {key!r}", key, lineno, source)
        raw[key] = value
        lines[key] = lineno

    def err(key, message):
        return ConfigError(f"{key}: {message}", key, lines.get(key), source)

    num = {key: _parse_float(key, raw[key], lines[key], source) for key in _FLOAT_KEYS if key in raw}
    k = num.pop("k", None)
    if k is not None:
        num.setdefault("k1", k)
        num.setdefault("k2", k)

    geom_kw = {key: v for key, v in num.items() if _FLOAT_KEYS[key] == "geom"}
    radio_kw = {key: v for key, v in num.items() if _FLOAT_KEYS[key] == "radio"}
    fading_kw = {key: v for key, v in num.items() if _FLOAT_KEYS[key] == "fading"}
    if "n_elements" in raw:
        fading_kw["n_elements"] = _parse_int("n_elements", raw["n_elements"], lines["n_elements"], source)
    if "rayleigh_convention" in raw:
        fading_kw["rayleigh_convention"] = raw["rayleigh_convention"]

    def build(cls, kw):
        # validate field by field so the error names the offending key
        defaults = cls()
        for key, value in kw.items():
            try:
                dataclasses.replace(defaults, **{key: value})
            except ValueError as exc:
                cfg_key = "k" if key in ("k1", "k2") and key not in raw and "k" in raw else key
                raise err(cfg_key, str(exc)) from None
        return dataclasses.replace(defaults, **kw)

    geom = build(LinkGeometry, geom_kw)
    fading = build(FadingConfig, fading_kw)
    radio = build(RadioConfig, radio_kw)

    sweep_kw = {}
    if "sweep.variable" in raw:
        sweep_kw["variable"] = raw["sweep.variable"]
    if "sweep.values" in raw:
        sweep_kw["values"] = tuple(_parse_float("sweep.values", v, lines["sweep.values"], source)
                                   for v in _split_list(raw["sweep.values"]))
    if "sweep.outputs" in raw:
        sweep_kw["outputs"] = tuple(_split_list(raw["sweep.outputs"]))
    if "samples" in raw:
        sweep_kw["n_samples"] = _parse_int("samples", raw["samples"], lines["samples"], source)
    if "seed" in raw:
        sweep_kw["seed"] = _parse_int("seed", raw["seed"], lines["seed"], source)
    field_key = {"variable": "sweep.variable", "values": "sweep.values",
                 "outputs": "sweep.outputs", "n_samples": "samples", "seed": "seed"}
    spec = SweepSpec()
    # variable before values: which values are legal depends on it
    for key in ("variable", "values", "outputs", "n_samples", "seed"):
        if key in sweep_kw:
            try:
                spec = dataclasses.replace(spec, **{key: sweep_kw[key]})
            except ValueError as exc:
                raise err(field_key[key], str(exc)) from None
    if spec.variable == "d1_split":
        total = geom.d1 + geom.d2
        if any(not 0 < v < total for v in spec.values):
            raise err("sweep.values", f"d1_split values must lie in (0, {total!r})")
    return geom, fading, radio, spec


def load_config(path):
    """Read and parse a config file; see :func:`parse_config`."""
    path = Path(path)
    try:
        text = path.read_text()
    except UnicodeDecodeError as exc:
        raise ConfigError(f"not a text file: {exc}", source=path) from None
    return parse_config(text, source=path)


def apply_sweep_value(geom, fading, radio, variable, value):
    """Configs for one sweep point."""
    if variable == "N":
        fading = dataclasses.replace(fading, n_elements=int(value))
    elif variable == "K":
        fading = dataclasses.replace(fading, k1=float(value), k2=float(value))
    elif variable == "d1_split":
        total = geom.d1 + geom.d2
        geom = dataclasses.replace(geom, d1=float(value), d2=total - float(value))
    elif variable == "tx_power":
        radio = dataclasses.replace(radio, tx_power_dbm=float(value))
    else:
        raise ValueError(f"unknown sweep variable {variable!r}")
    return geom, fading, radio


def _evaluate(output, geom, fading, radio, spec, workers):
    if output == "mc_capacity":
        est = link.mc_ergodic_capacity(geom, fading, radio, spec.n_samples, spec.seed, workers)
        return est.value, est.half_width_95
    if output == "mc_outage":
        est = link.mc_outage(geom, fading, radio, spec.n_samples, spec.seed, workers)
        return est.value, est.half_width_95
    if output == "cap_bound":
        return analytic.capacity_upper_bound(geom, fading, radio), 0.0
    if output == "outage_clt":
        return analytic.outage_clt(geom, fading, radio), 0.0
    if output == "outage_high_snr":
        return analytic.outage_high_snr(geom, fading, radio), 0.0
    raise ValueError(f"unknown output {output!r}")


def run_sweep(geom: LinkGeometry, fading: FadingConfig, radio: RadioConfig, spec: SweepSpec,
              out_path=None, workers: int | None = None) -> list[ResultRow]:
    """Evaluate every requested output at every sweep value.

    Every point reuses ``spec.seed`` (common random numbers across the
    sweep).  If ``out_path`` is given the CSV is written atomically.
    """
    rows = []
    for value in spec.values:
        g, f, r = apply_sweep_value(geom, fading, radio, spec.variable, value)
        values = {out: _evaluate(out, g, f, r, spec, workers) for out in spec.outputs}
        rows.append(ResultRow(float(value), values))
    if out_path is not None:
        write_csv(out_path, rows, geom, fading, radio, spec)
    return rows


def _header(geom, fading, radio, spec):
    lines = ["# linklab sweep"]
    for name, value in (
        ("d1", geom.d1), ("d2", geom.d2), ("d3", geom.d3),
        ("alpha1", geom.alpha1), ("alpha2", geom.alpha2), ("alpha3", geom.alpha3),
        ("ref_loss_db", geom.ref_loss_db),
        ("k1", fading.k1), ("k2", fading.k2), ("n_elements", fading.n_elements),
        ("rayleigh_convention", fading.rayleigh_convention.value),
        ("tx_power_dbm", radio.tx_power_dbm), ("bandwidth_hz", radio.bandwidth_hz),
        ("noise_psd_dbm_hz", radio.noise_psd_dbm_hz), ("gamma_th_db", radio.gamma_th_db),
        ("gamma0", transmit_snr(radio)),
        ("sweep.variable", spec.variable),
        ("sweep.values", ",".join(repr(v) for v in spec.values)),
        ("sweep.outputs", ",".join(spec.outputs)),
        ("samples", spec.n_samples), ("seed", spec.seed),
    ):
        lines.append(f"# {name} = {value!r}" if isinstance(value, float) else f"# {name} = {value}")
    return lines


def format_csv(rows, geom, fading, radio, spec) -> str:
    lines = _header(geom, fading, radio, spec)
    columns = ["sweep_value"]
    for out in spec.outputs:
        columns += [out, f"{out}_hw"]
    lines.append(",".join(columns))
    for row in rows:
        cells = [repr(float(row.sweep_value))]
        for out in spec.outputs:
            value, hw = row.values[out]
            cells += [repr(float(value)), repr(float(hw))]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_csv(path, rows, geom, fading, radio, spec) -> Path:
    """Write the sweep CSV via a temp file in the same directory and a rename."""
    path = Path(path)
    text = format_csv(rows, geom, fading, radio, spec)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


_PLOT_STUB = '''"""Plot {csv} (generated by linklab)."""
import numpy as np
import matplotlib.pyplot as plt

data = np.genfromtxt({csv!r}, delimiter=",", names=True, comments="#")
x = data["sweep_value"]
for name in {outputs!r}:
    y, hw = data[name], data[name + "_hw"]
    plt.errorbar(x, y, yerr=hw, marker="o", label=name)
plt.xlabel({xlabel!r})
{yscale}plt.legend()
plt.show()
'''


def write_plot_stub(script_path, csv_path, spec: SweepSpec) -> Path:
    """Emit a small matplotlib script that plots the CSV columns."""
    log_y = any(o in _PROBABILITIES for o in spec.outputs)
    text = _PLOT_STUB.format(csv=str(csv_path), outputs=list(spec.outputs), xlabel=spec.variable,
                             yscale='plt.yscale("log")\n' if log_y else "")
    script_path = Path(script_path)
    script_path.write_text(text)
    return script_path

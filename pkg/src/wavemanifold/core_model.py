"""Quadratic flux model: flux, Jacobian, characteristic speeds."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import NamedTuple

import numpy as np


@dataclass(frozen=True)
class ModelParams:
    b1: float = 8.0
    a1: float = 0.0
    a2: float = 0.0
    a3: float = 1.0
    a4: float = 0.0
    c: float = field(init=False)
    sigma0: float = field(init=False)

    def __post_init__(self):
        if not self.b1 > 1:
            raise ValueError(f"b1 must exceed 1, got {self.b1}")
        c = self.a3 - self.a2
        if not c > 0:
            raise ValueError(f"a3 - a2 must be positive, got {c}")
        object.__setattr__(self, "c", float(c))
        object.__setattr__(self, "sigma0", ((self.b1 + 1) * self.a4 - self.a1) / self.b1)

    @property
    def theta_plus(self):
        return self.b1 + 1.0

    @property
    def theta_minus(self):
        return self.b1 - 1.0

    @property
    def z_crit(self):
        return 1.0 / np.sqrt(self.b1 + 1.0)

    def to_dict(self):
        return {k: getattr(self, k) for k in ("b1", "a1", "a2", "a3", "a4")}


DEFAULT_PARAMS = ModelParams()


def load_params(path=None, **overrides) -> ModelParams:
    """Read parameters from a JSON or key=value file; missing keys keep defaults."""
    vals = DEFAULT_PARAMS.to_dict()
    if path is not None:
        text = Path(path).read_text()
        stripped = text.strip()
        if stripped.startswith("{"):
            data = json.loads(stripped)
        else:
            data = {}
            for line in text.splitlines():
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                key, _, val = line.partition("=")
                data[key.strip()] = val.strip()
        for k, v in data.items():
            if k not in vals:
                raise KeyError(f"unknown parameter {k!r}")
            vals[k] = float(v)
    for k, v in overrides.items():
        if v is not None:
            vals[k] = float(v)
    return ModelParams(**vals)


class State(NamedTuple):
    u: float
    v: float


@dataclass(frozen=True)
class CharData:
    lambda_s: float | None
    lambda_f: float | None
    delta: float

    @property
    def elliptic(self):
        return self.delta < 0


def flux(params: ModelParams, w):
    u, v = w
    f = 0.5 * (params.b1 + 1) * u * u + 0.5 * v * v + params.a1 * u + params.a2 * v
    g = u * v + params.a3 * u + params.a4 * v
    return f, g


def flux_array(params: ModelParams, u, v):
    """Vectorised flux, returns an array of shape (2, ...)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.stack(flux(params, (u, v)))


def jacobian(params: ModelParams, w):
    u, v = w
    return np.array([[(params.b1 + 1) * u + params.a1, v + params.a2],
                     [v + params.a3, u + params.a4]])


def discriminant(params: ModelParams, u, v):
    return (params.b1 * u + params.a1 - params.a4) ** 2 + 4 * (v + params.a2) * (v + params.a3)


def eigen_trace(params: ModelParams, u):
    return (params.b1 + 2) * u + params.a1 + params.a4


def char_data(params: ModelParams, w) -> CharData:
    u, v = float(w[0]), float(w[1])
    d = float(discriminant(params, u, v))
    if d < 0:
        return CharData(None, None, d)
    tr = eigen_trace(params, u)
    r = np.sqrt(d)
    return CharData(0.5 * (tr - r), 0.5 * (tr + r), d)


def is_strictly_hyperbolic(params: ModelParams, w) -> bool:
    return bool(discriminant(params, w[0], w[1]) > 0)


def max_abs_speed(params: ModelParams, u, v):
    """Bound on the spectral radius of DF, valid in elliptic cells too."""
    d = discriminant(params, u, v)
    return 0.5 * np.abs(eigen_trace(params, u)) + 0.5 * np.sqrt(np.abs(d))


def coincidence_ellipse(params: ModelParams, n=200):
    """States with a double eigenvalue, sampled on the boundary of the elliptic region."""
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    c = params.c
    # (b1 u + a1 - a4)^2 + (2v + a2 + a3)^2 = c^2
    u = (c * np.cos(t) - params.a1 + params.a4) / params.b1
    v = (c * np.sin(t) - params.a2 - params.a3) / 2
    return u, v

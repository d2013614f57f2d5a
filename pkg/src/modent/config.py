"""Experiment configuration: JSON schema, tolerance handling and object builders."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

from .errors import ConfigError
from .families import MatrixFamily, build_family
from .models import (Reparametrization, SmoothProbe, abelian_line_family, abelian_space,
                     discretize_u1, oscillator_space, skew_pair_family, spectral_family,
                     u1_family)
from .models.oscillator import to_real
from .purification import PureSpace, purify
from .spaces import SymplecticHilbertSpace

DEFAULT_TOLERANCES = {
    "rank": 1e-10,        # relative rank/validity tolerance of spaces
    "dmp": 1e-7,          # differential-modular-position residual
    "property": None,     # slack for the monotonicity suite (None: 1e-8 (1 + max T))
    "h": None,            # finite-difference step (None: 1e-3 x domain length)
    "oracle": 1e-8,       # absolute error (per unit entropy) for oracle comparisons
}

_vector = {"type": "array", "items": {"type": "number"}}
_matrix = {"type": "array", "items": _vector}
_probe = {
    "oneOf": [
        _vector,
        {"type": "object", "required": ["re"],
         "properties": {"re": _vector, "im": _vector}, "additionalProperties": False},
        {"type": "object", "required": ["kind"], "properties": {"kind": {"type": "string"}}},
    ]
}
_grid = {
    "oneOf": [
        _vector,
        {"type": "object", "required": ["start", "stop", "num"],
         "properties": {"start": {"type": "number"}, "stop": {"type": "number"},
                        "num": {"type": "integer", "minimum": 1}},
         "additionalProperties": False},
    ]
}

_complex = {"type": "object", "required": ["re"],
            "properties": {"re": _vector, "im": _vector}, "additionalProperties": False}
_subspace = {
    "oneOf": [
        {"type": "array", "items": {"oneOf": [_vector, _complex]}},
        {"type": "object", "required": ["modes"],
         "properties": {"modes": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
         "additionalProperties": False},
        {"type": "object", "required": ["half_line"],
         "properties": {"half_line": {"type": "number"}}, "additionalProperties": False},
    ]
}

SCHEMA = {
    "type": "object",
    "properties": {
        "space": {
            "oneOf": [
                {"type": "object", "required": ["tau", "sigma"],
                 "properties": {"dim": {"type": "integer", "minimum": 1},
                                "tau": _matrix, "sigma": _matrix}},
                {"type": "object", "required": ["model"],
                 "properties": {"model": {"enum": ["oscillator", "abelian", "u1_discretized"]},
                                "params": {"type": "object"}}},
            ]
        },
        "subspace": _subspace,
        "cut_subspace": _subspace,
        "probe": _probe,
        "probes": {"type": "array", "items": _probe},
        "reference": _probe,
        "family": {
            "type": "object", "required": ["model"],
            "properties": {
                "model": {"enum": ["matrix", "oscillator_spectral", "skew_pair", "u1_vacuum",
                                   "u1_kms", "u1_reparam", "abelian_line"]},
                "params": {"type": "object"},
                "domain": {"type": "array", "items": {"type": "number"}, "minItems": 2,
                           "maxItems": 2},
                "steps": {"type": "array", "items": {
                    "type": "object", "required": ["t", "generators"],
                    "properties": {"t": {"type": "number"}, "generators": _matrix}}},
                "attest": {"type": "boolean"},
            },
        },
        "grid": _grid,
        "s_grid": _grid,
        "t_grid": _grid,
        "points": _vector,
        "pairs": {"type": "array", "items": {"type": "array", "items": {"type": "number"},
                                             "minItems": 2, "maxItems": 2}},
        "tolerances": {"type": "object"},
        "seed": {"type": "integer"},
        "convergence": {"type": "object"},
        "oracles": {"type": "object"},
        "output": {"type": "string"},
    },
}


@dataclass
class ExperimentConfig:
    doc: dict
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    seed: int = 0
    source: str | None = None

    def get(self, key, default=None):
        return self.doc.get(key, default)

    def require(self, *keys):
        missing = [k for k in keys if k not in self.doc]
        if missing:
            raise ConfigError(f"config is missing required key(s): {', '.join(missing)}")


def _parse_value(text: str):
    low = text.strip().lower()
    if low in ("none", "null"):
        return None
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"tolerance value {text!r} is not a number") from exc


def load_config(path: str | Path | None, overrides=(), seed: int | None = None) -> ExperimentConfig:
    """Read and validate a JSON config; apply ``KEY=VAL`` tolerance overrides."""
    if path is None:
        doc = {}
    else:
        text = Path(path).read_text()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return config_from_dict(doc, overrides, seed, None if path is None else str(path))


def config_from_dict(doc: dict, overrides=(), seed: int | None = None,
                     source: str | None = None) -> ExperimentConfig:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {where}: {exc.message}") from exc
    tol = dict(DEFAULT_TOLERANCES)
    for k, v in doc.get("tolerances", {}).items():
        if k not in tol:
            raise ConfigError(f"unknown tolerance {k!r}; known: {', '.join(tol)}")
        tol[k] = v
    for item in overrides or ():
        if "=" not in item:
            raise ConfigError(f"--tol-override expects KEY=VAL, got {item!r}")
        k, v = item.split("=", 1)
        k = k.strip()
        if k not in tol:
            raise ConfigError(f"unknown tolerance {k!r}; known: {', '.join(tol)}")
        tol[k] = _parse_value(v)
    if tol["rank"] is None or not tol["rank"] > 0:
        raise ConfigError("rank tolerance must be positive")
    cfg_seed = int(doc.get("seed", 0)) if seed is None else int(seed)
    return ExperimentConfig(doc, tol, cfg_seed, source)


# -- builders ---------------------------------------------------------------


def grid_from(entry) -> np.ndarray:
    if isinstance(entry, dict):
        g = np.linspace(entry["start"], entry["stop"], entry["num"])
    else:
        g = np.asarray(entry, dtype=float)
    if g.size and np.any(np.diff(g) < 0):
        raise ConfigError("grids must be sorted")
    return g


def build_space(cfg: ExperimentConfig):
    """Return (space, model_object_or_None)."""
    cfg.require("space")
    entry = cfg.get("space")
    rtol = cfg.tolerances["rank"]
    if "model" not in entry:
        return SymplecticHilbertSpace.from_dict(entry, rtol=rtol), None
    params = entry.get("params", {})
    model = entry["model"]
    try:
        if model == "oscillator":
            return oscillator_space(params["M"], rtol=rtol), {"kind": "oscillator", **params}
        if model == "abelian":
            return abelian_space(params["weights"], rtol=rtol), {"kind": "abelian", **params}
        if model == "u1_discretized":
            g = discretize_u1(int(params.get("cells", 32)), tuple(params.get("window", (-2.0, 2.0))),
                              params.get("beta"))
            return g.space, g
    except KeyError as exc:
        raise ConfigError(f"space model {model!r} needs parameter {exc}") from exc
    raise ConfigError(f"unknown space model {model!r}")


def vector_from(pure: PureSpace, entry, model=None) -> np.ndarray:
    """Probe vector in K+ user coordinates.

    Plain lists are K or K+ coordinates.  ``{"re": .., "im": ..}`` is a complex
    vector: for oscillator spaces it is C^n (real coordinates (Re; Im)), for
    other spaces it is u + i+ v with u, v in K.
    """
    if isinstance(entry, dict) and "kind" in entry:
        raise ConfigError("a function probe cannot be used with a matrix space")
    if isinstance(entry, dict):
        re = np.asarray(entry["re"], dtype=float)
        im = np.asarray(entry.get("im", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape:
            raise ConfigError("probe 're' and 'im' must have equal length")
        if isinstance(model, dict) and model.get("kind") == "oscillator":
            return pure.lift(to_real(re + 1j * im))
        return pure.lift(re) + pure.i_matrix @ pure.lift(im)
    return pure.lift(np.asarray(entry, dtype=float))


def probes_from(cfg: ExperimentConfig) -> list:
    if "probes" in cfg.doc:
        return list(cfg.doc["probes"])
    if "probe" in cfg.doc:
        return [cfg.doc["probe"]]
    raise ConfigError("config needs 'probe' or 'probes'")


def function_probe(entry) -> SmoothProbe:
    if not isinstance(entry, dict) or "kind" not in entry:
        raise ConfigError("model families need a function probe {'kind': ...}")
    return SmoothProbe.from_dict(entry)


def build_family_from(cfg: ExperimentConfig):
    cfg.require("family")
    entry = cfg.get("family")
    model = entry["model"]
    params = dict(entry.get("params", {}))
    domain = tuple(entry.get("domain", (-2.0, 2.0)))
    if len(domain) == 2 and not domain[1] > domain[0]:
        raise ConfigError("family domain must satisfy a < b")
    if model == "u1_vacuum":
        return u1_family(domain)
    if model == "u1_kms":
        if "beta" not in params:
            raise ConfigError("u1_kms needs params.beta")
        return u1_family(domain, beta=float(params["beta"]))
    if model == "u1_reparam":
        h = Reparametrization(params.get("kind", "tanh"), float(params.get("a", 0.3)),
                              float(params.get("b", 1.0)))
        return u1_family(domain, h=h)
    if model == "abelian_line":
        return abelian_line_family(domain)
    if model == "oscillator_spectral":
        if "M" not in params:
            raise ConfigError("oscillator_spectral needs params.M")
        return spectral_family(params["M"], tuple(entry["domain"]) if "domain" in entry else None)
    if model == "skew_pair":
        return skew_pair_family()
    if model == "matrix":
        space, _ = build_space(cfg)
        steps = sorted(entry.get("steps", []), key=lambda st: st["t"])
        if not steps:
            raise ConfigError("matrix family needs 'steps'")
        ts = [st["t"] for st in steps]
        gens = [st["generators"] for st in steps]

        def generator(t):
            k = int(np.searchsorted(ts, t, side="right"))
            return [] if k == 0 else [np.asarray(g, dtype=float) for g in gens[k - 1]]

        return build_family(purify(space, tol=cfg.tolerances["rank"]), generator, domain,
                            attest=bool(entry.get("attest", False)), name="matrix")
    raise ConfigError(f"unknown family model {model!r}")


def family_probe(cfg: ExperimentConfig, family):
    entry = probes_from(cfg)[0]
    if isinstance(family, MatrixFamily):
        model = None
        if cfg.get("family", {}).get("model") in ("oscillator_spectral", "skew_pair"):
            model = {"kind": "oscillator"}
        elif "space" in cfg.doc and cfg.doc["space"].get("model") == "oscillator":
            model = {"kind": "oscillator"}
        return vector_from(family.pure, entry, model)
    return function_probe(entry)


def finite_or_none(x: float):
    return x if math.isfinite(x) else None

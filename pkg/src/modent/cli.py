"""Command-line experiment runner.

Every subcommand reads a JSON config, writes its artifacts (CSV tables, JSON
reports) to ``--out`` and finishes with ``manifest.json`` holding the config
echo, tolerances, library versions, timings and a SHA-256 of every emitted
file.  Exit codes: 0 success, 1 a check failed (reports still written),
2 configuration error, 3 numerical error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import os
import platform
import sys
import time
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .config import (ExperimentConfig, build_family_from, build_space, family_probe,
                     function_probe, grid_from, load_config, probes_from, vector_from)
from .errors import ConfigError, NumericalError
from .families import MatrixFamily, derivative_report, dmp_check, property_suite, t_table
from .models import (GalerkinU1, abelian_entropy, convergence_study, mode_generators,
                     oscillator_entropy, subset_generators)
from .modular import entropy_form, modular_data
from .purification import purify
from .spaces import validate_space
from .subspaces import decompose

log = logging.getLogger("modent")

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4


def jsonable(x):
    """Convert numpy/inf values into strict JSON (non-finite floats become strings)."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    return x


class Bundle:
    """Collects emitted files; writes them immediately and hashes them for the manifest."""

    def __init__(self, out: Path):
        self.out = out
        self.files: dict[str, str] = {}
        out.mkdir(parents=True, exist_ok=True)

    def write_text(self, name: str, text: str):
        path = self.out / name
        path.write_text(text, newline="")
        self.files[name] = hashlib.sha256(path.read_bytes()).hexdigest()
        log.info("wrote %s", path)

    def write_json(self, name: str, doc):
        self.write_text(name, json.dumps(jsonable(doc), indent=2, sort_keys=True,
                                         allow_nan=False) + "\n")

    def write_csv(self, name: str, header, rows):
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        self.write_text(name, "\n".join(lines) + "\n")


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return "%.17g" % v if math.isfinite(v) else ("inf" if v > 0 else "nan")
    return str(v)


def _provenance(oracle: str, tol) -> dict:
    return {"oracle": oracle, "tolerance": tol}


# -- subspace / probe helpers -------------------------------------------------


def _model_kind(cfg: ExperimentConfig):
    space = cfg.get("space", {})
    return space.get("model")


def _generators(cfg: ExperimentConfig, key: str, pure, model):
    entry = cfg.get(key)
    if entry is None:
        raise ConfigError(f"config needs {key!r}")
    kind = _model_kind(cfg)
    if isinstance(entry, dict):
        if "modes" in entry:
            modes = [int(m) for m in entry["modes"]]
            params = cfg.get("space").get("params", {})
            if kind == "oscillator":
                return mode_generators(len(params["M"]), modes)
            if kind == "abelian":
                n = len(params["weights"])
                mask = np.zeros(n, dtype=bool)
                mask[modes] = True
                return subset_generators(n, mask)
            raise ConfigError("'modes' subspaces need an oscillator or abelian space")
        if "half_line" in entry:
            if not isinstance(model, GalerkinU1):
                raise ConfigError("'half_line' subspaces need a u1_discretized space")
            return model.generators(float(entry["half_line"]))
        raise ConfigError(f"{key}: expected a list of generators, 'modes' or 'half_line'")
    return [vector_from(pure, g, model) for g in entry]


def _probe_vector(pure, entry, model):
    if isinstance(entry, dict) and "kind" in entry:
        if not isinstance(model, GalerkinU1):
            raise ConfigError("function probes need a u1_discretized space")
        return model.probe_vector(function_probe(entry))
    return vector_from(pure, entry, model)


def _probe_label(entry) -> str:
    return json.dumps(entry, sort_keys=True, separators=(",", ":"))


# -- commands ----------------------------------------------------------------


def cmd_validate(cfg: ExperimentConfig, bundle: Bundle, args) -> int:
    space, _ = build_space(cfg)
    report = validate_space(space, cfg.tolerances["rank"])
    doc = report.to_dict()
    doc["provenance"] = _provenance("form validation", cfg.tolerances["rank"])
    bundle.write_json("validation.json", doc)
    return EXIT_OK if report.is_valid else EXIT_CHECK


def _decomposition(cfg: ExperimentConfig, key: str = "subspace"):
    space, model = build_space(cfg)
    pure = purify(space, tol=cfg.tolerances["rank"])
    dec = decompose(pure, _generators(cfg, key, pure, model))
    return pure, model, dec


def cmd_decompose(cfg: ExperimentConfig, bundle: Bundle, args) -> int:
    pure, _, dec = _decomposition(cfg)
    md = modular_data(dec)
    doc = dec.to_dict()
    doc["log_delta_spectrum"] = md.log_delta_spectrum
    doc["Delta"] = md.Delta
    doc["J"] = md.J
    doc["i_plus"] = pure.i_matrix
    doc["provenance"] = _provenance("subspace decomposition", cfg.tolerances["rank"])
    bundle.write_json("decomposition.json", doc)
    return EXIT_OK


def cmd_entropy(cfg: ExperimentConfig, bundle: Bundle, args) -> int:
    pure, model, dec = _decomposition(cfg)
    form = entropy_form(modular_data(dec))
    cut = None
    if "cut_subspace" in cfg.doc:
        cut = decompose(pure, _generators(cfg, "cut_subspace", pure, model))
        if not all(dec.L.contains(v) for v in cut.L.basis.T):
            raise ConfigError("cut_subspace must be contained in subspace")
    ref = cfg.get("reference")
    g = None if ref is None else _probe_vector(pure, ref, model)
    rows = []
    for entry in probes_from(cfg):
        f = _probe_vector(pure, entry, model)
        h = f if g is None else g - f
        row = {"probe": entry, "entropy": form.value(h), "infinite": form.is_infinite(h)}
        if cut is not None:
            reduced = form.value(cut.cut(h))
            row["entropy_after_cut"] = reduced
            row["delta"] = row["entropy"] - reduced
        rows.append(row)
    bundle.write_json("entropy.json", {
        "dims": dec.dims, "results": rows,
        "provenance": _provenance("generic modular engine", cfg.tolerances["rank"])})
    header = ["probe", "entropy", "is_infinite"] + (["entropy_after_cut", "delta"] if cut else [])
    bundle.write_csv("entropy.csv", header, [
        [_probe_label(r["probe"]).replace(",", ";"), r["entropy"], r["infinite"]]
        + ([r["entropy_after_cut"], r["delta"]] if cut else []) for r in rows])
    return EXIT_OK


def _points(cfg: ExperimentConfig, family):
    if "points" in cfg.doc:
        return [float(p) for p in cfg.doc["points"]]
    lo, hi = family.domain
    return list(np.linspace(lo, hi, 7)[1:-1])


def cmd_family_scan(cfg: ExperimentConfig, bundle: Bundle, args) -> int:
    family = build_family_from(cfg)
    f = family_probe(cfg, family)
    s_grid = grid_from(cfg.get("s_grid", cfg.get("grid", {"start": family.domain[0],
                                                           "stop": family.domain[1], "num": 21})))
    t_grid = grid_from(cfg.get("t_grid", cfg.get("grid", {"start": family.domain[0],
                                                           "stop": family.domain[1], "num": 21})))
    table = t_table(family, f, s_grid, t_grid, threads=args.threads)
    bundle.write_text("tf_table.csv", table.to_csv())
    reports = []
    if not isinstance(family, MatrixFamily) or "points" in cfg.doc:
        for t in _points(cfg, family):
            try:
                rep = derivative_report(family, f, t, h=cfg.tolerances["h"])
                reports.append({"ok": True, **rep.to_dict()})
            except NumericalError as exc:
                reports.append({"ok": False, "t": t, "error": type(exc).__name__,
                                "message": str(exc)})
    bundle.write_json("derivatives.json", {
        "family": family.name, "reports": reports,
        "provenance": _provenance("central finite differences vs closed-form split",
                                  cfg.tolerances["h"])})
    return EXIT_OK


def cmd_dmp_check(cfg: ExperimentConfig, bundle: Bundle, args) -> int:
    family = build_family_from(cfg)
    if not isinstance(family, MatrixFamily):
        raise ConfigError("dmp-check needs a matrix-backed family")
    pairs = cfg.get("pairs")
    if not pairs:
        lo, hi = family.domain
        pairs = [[lo, hi]]
    tol = cfg.tolerances["dmp"]
    reports = [dmp_check(family, float(s), float(t), tol=tol, seed=cfg.seed).to_dict()
               for s, t in pairs]
    ok = all(r["holds"] for r in reports)
    bundle.write_json("dmp.json", {"family": family.name, "all_hold": ok, "reports": reports,
                                   "provenance": _provenance("bilinear orthogonality residual",
                                                             tol)})
    return EXIT_OK if ok else EXIT_CHECK


def cmd_property_suite(cfg: ExperimentConfig, bundle: Bundle, args) -> int:
    family = build_family_from(cfg)
    f = family_probe(cfg, family)
    grid = grid_from(cfg.get("grid", {"start": family.domain[0], "stop": family.domain[1],
                                      "num": 20}))
    report = property_suite(family, f, grid, tol=cfg.tolerances["property"], threads=args.threads)
    doc = report.to_dict()
    doc["family"] = family.name
    doc["provenance"] = _provenance("grid monotonicity checks", report.tol)
    bundle.write_text("tf_table.csv", report.table.to_csv())
    bundle.write_json("property_suite.json", doc)
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_oracle_compare(cfg: ExperimentConfig, bundle: Bundle, args) -> int:
    tol = cfg.tolerances["oracle"]
    rows, ok = [], True
    kind = _model_kind(cfg)
    if kind in ("oscillator", "abelian") and "subspace" in cfg.doc:
        pure, model, dec = _decomposition(cfg)
        form = entropy_form(modular_data(dec))
        entry = cfg.get("subspace")
        if not (isinstance(entry, dict) and "modes" in entry):
            raise ConfigError("oracle-compare on matrix models needs a 'modes' subspace")
        modes = [int(m) for m in entry["modes"]]
        params = cfg.get("space")["params"]
        for p in probes_from(cfg):
            if not isinstance(p, dict) or "re" not in p:
                raise ConfigError("oracle probes must be complex {'re': .., 'im': ..}")
            fc = np.asarray(p["re"], dtype=float) + 1j * np.asarray(p.get("im", [0] * len(p["re"])))
            engine = form.value(_probe_vector(pure, p, model))
            if kind == "oscillator":
                oracle = oscillator_entropy(params["M"], modes, fc)
                name = "oscillator closed form 2(f, E arcoth(M) f)"
            else:
                mask = np.zeros(len(params["weights"]), dtype=bool)
                mask[modes] = True
                oracle = abelian_entropy(params["weights"], mask, fc)
                name = "abelian closed form 2 sum mu (Im f)^2"
            err = abs(engine - oracle) if math.isfinite(oracle) else (0.0 if engine == oracle else math.inf)
            passed = err <= tol * (1.0 + (abs(oracle) if math.isfinite(oracle) else 0.0))
            ok &= passed
            rows.append({"case": _probe_label(p), "oracle": name, "engine": engine,
                         "reference": oracle, "abs_error": err, "passed": passed})
    elif "family" in cfg.doc:
        family = build_family_from(cfg)
        if getattr(family, "second_derivative_terms", None) is None:
            raise ConfigError("oracle-compare needs a family with a closed-form derivative split")
        f = family_probe(cfg, family)
        rtol = float(cfg.get("oracles", {}).get("derivative_rtol", 1e-3))
        for t in _points(cfg, family):
            rep = derivative_report(family, f, t, h=cfg.tolerances["h"])
            ref = rep.closed_form["sum"]
            err = abs(rep.d2S_dt2 - ref)
            passed = err <= rtol * max(abs(ref), 1e-12)
            ok &= passed
            rows.append({"case": f"t={t:.17g}", "oracle": "boundary + bulk second-derivative split",
                         "engine": rep.d2S_dt2, "reference": ref, "abs_error": err,
                         "passed": passed})
        tol = rtol
    else:
        raise ConfigError("oracle-compare needs an oscillator/abelian space with 'modes' "
                          "or a model family")
    bundle.write_csv("oracle_compare.csv", ["case", "engine", "reference", "abs_error", "passed"],
                     [[r["case"].replace(",", ";"), r["engine"], r["reference"], r["abs_error"],
                       r["passed"]] for r in rows])
    bundle.write_json("oracle_compare.json", {"all_passed": ok, "rows": rows,
                                              "provenance": _provenance("closed forms", tol)})
    return EXIT_OK if ok else EXIT_CHECK


def cmd_convergence(cfg: ExperimentConfig, bundle: Bundle, args) -> int:
    conv = dict(cfg.get("convergence", {}))
    probe = function_probe(probes_from(cfg)[0])
    cells = [int(n) for n in conv.get("cells", (16, 32, 64))]
    if cells != sorted(cells):
        raise ConfigError("convergence cells must be increasing")
    rows = convergence_study(probe, float(conv.get("t", 0.0)), cells,
                             tuple(conv.get("window", (-2.0, 2.0))), conv.get("beta"))
    gaps = [r.gap for r in rows]
    decreasing = all(b < a for a, b in zip(gaps, gaps[1:]))
    bundle.write_csv("convergence.csv",
                     ["cells", "entropy", "reference", "gap", "interval_reference", "interval_gap"],
                     [[r.cells, r.entropy, r.reference, r.gap,
                       math.nan if r.interval_reference is None else r.interval_reference,
                       math.nan if r.interval_gap is None else r.interval_gap] for r in rows])
    bundle.write_json("convergence.json", {
        "rows": [r.to_dict() for r in rows], "gap_decreasing": decreasing,
        "provenance": _provenance("half-line closed form", None)})
    return EXIT_OK if decreasing else EXIT_CHECK


COMMANDS = {
    "validate": (cmd_validate, "check the forms of a symplectic Hilbert space"),
    "decompose": (cmd_decompose, "split a subspace and report its modular data"),
    "entropy": (cmd_entropy, "relative entropies of coherent excitations"),
    "family-scan": (cmd_family_scan, "T_f(s, t) table and derivative reports"),
    "dmp-check": (cmd_dmp_check, "differential modular position of family pairs"),
    "property-suite": (cmd_property_suite, "monotonicity checks of T_f on a grid"),
    "oracle-compare": (cmd_oracle_compare, "engine vs closed-form oracles"),
    "convergence": (cmd_convergence, "discretized U(1) convergence study"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="modent", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"modent {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", required=True, help="JSON experiment config")
        sp.add_argument("--out", default="modent_out", help="output directory")
        sp.add_argument("--seed", type=int, default=None, help="seed for randomized checks")
        sp.add_argument("--threads", type=int, default=1, help="worker threads for grid cells")
        sp.add_argument("--tol-override", action="append", default=[], metavar="KEY=VAL",
                        help="override a tolerance (repeatable)")
    return p


def _versions() -> dict:
    return {"modent": __version__, "python": platform.python_version(),
            "numpy": np.__version__, "scipy": scipy.__version__}


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("MODENT_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("modent: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    start = time.perf_counter()
    bundle, cfg, code, error = None, None, EXIT_OK, None
    try:
        cfg = load_config(args.config, args.tol_override, args.seed)
        bundle = Bundle(Path(args.out))
        code = COMMANDS[args.command][0](cfg, bundle, args)
    except NumericalError as exc:
        code, error = EXIT_NUMERIC, exc
    except (ConfigError, ValueError, KeyError, TypeError) as exc:
        code, error = EXIT_CONFIG, exc
    except OSError as exc:
        code, error = EXIT_IO, exc
    if error is not None:
        print(f"modent {args.command}: {type(error).__name__}: {error}", file=sys.stderr)
    manifest = {
        "command": args.command,
        "config": None if cfg is None else cfg.doc,
        "config_path": args.config,
        "tolerances": None if cfg is None else cfg.tolerances,
        "seed": None if cfg is None else cfg.seed,
        "threads": args.threads,
        "versions": _versions(),
        "timings": {"total_seconds": time.perf_counter() - start},
        "files": {} if bundle is None else dict(bundle.files),
        "exit_code": code,
        "error": None if error is None else f"{type(error).__name__}: {error}",
        "complete": error is None,
    }
    try:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "manifest.json").write_text(
            json.dumps(jsonable(manifest), indent=2, sort_keys=True, allow_nan=False) + "\n")
    except OSError as exc:
        print(f"modent: cannot write manifest: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())

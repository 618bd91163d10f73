"""Scenario runner: builds states, evaluates witnesses, writes a JSON or CSV report.

Exit codes: 0 completed (whatever the verdicts), 2 invalid configuration or
scenario parameters, 3 numerical validation failure, 1 any other error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cc_states import geometric_distribution, is_cc_in_bases, number_correlated, LocalBasis
from .criteria import (
    DEFAULT_TOLERANCES, Povm, cc_commutator_witness, commutator_matrix, conditional_state,
    displaced_frame, mandel_q, mandel_q_witness, nowhere_dense_perturbation, perturb_mode_a,
    variance_witness,
)
from .fock_core import (
    DensityMatrix, coherent_ket, fock_ket, partial_trace, tensor, thermal_state, trace_distance,
    validate_density,
)
from .phase_space import (
    GaussianP, PointMixtureP, conditional_P, p_from_dict, p_moments, predicted_variance_floor,
    synthesize_state,
)
from . import criteria, sweeps

CONFIG_DIR_ENV = "NONCLASSICAL_CONFIG_DIR"

SCENARIOS = ("number-correlated", "gaussian-p", "point-mixture-commutator",
             "perturbation", "conditioning", "sweep")

TWO_ATOM_FIXTURE = [(0.5, 1.0, 0.0), (0.5, -1.0, 2.0)]

DEFAULTS = {
    "number-correlated": {"cutoff": 30, "params": {"ratio": 0.5}},
    "gaussian-p": {"cutoff": 24, "samples": 100000, "params": {"nbar_a": 1.0, "nbar_b": 1.0}},
    "point-mixture-commutator": {"cutoff": 40, "params": {}},
    "perturbation": {"cutoff": 40, "params": {"nbar": 0.5, "alpha_bar": [1.0, 0.5],
                                              "eps": [0.001, 0.01, 0.1]}},
    "conditioning": {"cutoff": 40, "params": {}},
    "sweep": {"cutoff": None, "samples": 2000, "params": {"draws": 100}},
}


class ConfigError(ValueError):
    pass


class NumericalValidationError(RuntimeError):
    pass


# ------------------------------------------------------------ config

def _parse_kv(items, what):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"{what} must look like key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k] = json.loads(v)
        except json.JSONDecodeError:
            out[k] = v
    return out


def _find_config(path: str) -> Path:
    p = Path(path)
    if p.exists() or p.is_absolute():
        return p
    base = os.environ.get(CONFIG_DIR_ENV)
    if base and (Path(base) / p).exists():
        return Path(base) / p
    return p


def resolve_config(args: argparse.Namespace) -> dict:
    cfg: dict = {}
    if args.config:
        path = _find_config(args.config)
        try:
            cfg = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise ConfigError("config file must hold a JSON object")
    scenario = args.scenario or cfg.get("scenario")
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown or missing scenario {scenario!r}; choose from {SCENARIOS}")
    base = DEFAULTS[scenario]
    out = {
        "scenario": scenario,
        "cutoff": cfg.get("cutoff", base.get("cutoff")),
        "samples": cfg.get("samples", base.get("samples", 100000)),
        "seed": cfg.get("seed", 0),
        "tolerances": dict(cfg.get("tolerances", {})),
        "params": {**base["params"], **cfg.get("params", {})},
        "output": dict(cfg.get("output", {})),
    }
    if args.cutoff is not None:
        out["cutoff"] = args.cutoff
    if args.samples is not None:
        out["samples"] = args.samples
    if args.seed is not None:
        out["seed"] = args.seed
    out["tolerances"].update(_parse_kv(args.tolerance, "--tolerance"))
    out["params"].update(_parse_kv(args.param, "--param"))
    if args.output is not None:
        out["output"]["path"] = args.output
    if args.format is not None:
        out["output"]["format"] = args.format
    out["output"].setdefault("path", None)
    out["output"].setdefault("format", "json")
    _check_config(out)
    return out


def _check_config(cfg: dict) -> None:
    c = cfg["cutoff"]
    if c is not None:
        dims = c if isinstance(c, list) else [c]
        if not all(isinstance(d, int) and d >= 2 for d in dims) or len(dims) not in (1, 2):
            raise ConfigError(f"cutoff must be an integer >= 2 or a pair of them, got {c!r}")
    if not isinstance(cfg["samples"], int) or cfg["samples"] < 1:
        raise ConfigError(f"samples must be a positive integer, got {cfg['samples']!r}")
    if not isinstance(cfg["seed"], int) or cfg["seed"] < 0:
        raise ConfigError(f"seed must be a nonnegative integer, got {cfg['seed']!r}")
    unknown = set(cfg["tolerances"]) - set(DEFAULT_TOLERANCES)
    if unknown:
        raise ConfigError(f"unknown tolerance keys {sorted(unknown)}")
    if cfg["output"]["format"] not in ("json", "csv"):
        raise ConfigError(f"format must be json or csv, got {cfg['output']['format']!r}")


# --------------------------------------------------------- scenarios

def _dims(cfg):
    c = cfg["cutoff"]
    return tuple(c) if isinstance(c, list) else (c, c)


def _complex(v):
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


def _checked(rho: DensityMatrix, tol: dict) -> DensityMatrix:
    diag = validate_density(rho, psd_tol=tol.get("psd", DEFAULT_TOLERANCES["psd"]))
    if not diag.ok:
        raise NumericalValidationError(
            f"state failed validation: hermiticity {diag.hermiticity_residual:.3g}, "
            f"trace {diag.trace:.12g}, min eigenvalue {diag.min_eigenvalue:.3g}")
    return rho


def _fixture(params) -> PointMixtureP:
    if "p" in params:
        P = p_from_dict(params["p"])
        if not isinstance(P, PointMixtureP):
            raise ConfigError("this scenario needs a point-mixture P")
        return P
    atoms = params.get("atoms", TWO_ATOM_FIXTURE)
    return PointMixtureP.from_atoms([(w, _complex(a), _complex(b)) for w, a, b in atoms])


def _number_correlated(cfg, tol):
    dims = _dims(cfg)
    prm = cfg["params"]
    if "p_n" in prm:
        p = np.asarray(prm["p_n"], dtype=float)
    else:
        p = geometric_distribution(float(prm["ratio"]), min(dims))
    rho = _checked(number_correlated(p, dims), tol)
    w = variance_witness(rho, tol)
    return [w], {"variance_number_difference": w.diagnostics["variance_number_difference"],
                 "mean_total_number": w.diagnostics["mean_total_number"]}


def _gaussian_p(cfg, tol):
    prm = cfg["params"]
    if "p" in prm:
        P = p_from_dict(prm["p"])
    else:
        P = GaussianP.thermal(float(prm["nbar_a"]), float(prm["nbar_b"]),
                              (_complex(prm.get("mean_a", 0)), _complex(prm.get("mean_b", 0))))
    if isinstance(P, GaussianP):
        rho = synthesize_state(P, _dims(cfg), "monte_carlo", n=cfg["samples"], seed=cfg["seed"])
    else:
        rho = synthesize_state(P, _dims(cfg))
    rho = _checked(rho, tol)
    w = variance_witness(rho, tol)
    reports = [w, mandel_q_witness(partial_trace(rho, 0), tol),
               mandel_q_witness(partial_trace(rho, 1), tol)]
    a0, b0, cov = p_moments(P)
    results = {
        "predicted_variance_floor": predicted_variance_floor(P),
        "variance_number_difference": w.diagnostics["variance_number_difference"],
        "variance_standard_error": w.diagnostics["mc_error_variance"],
        "p_mean": [[a0.real, a0.imag], [b0.real, b0.imag]],
        "p_cov_trace": float(np.trace(cov)),
    }
    return reports, results


def _point_mixture_commutator(cfg, tol):
    P = _fixture(cfg["params"])
    rho = _checked(synthesize_state(P, _dims(cfg)), tol)
    w = cc_commutator_witness(rho, tol)
    cm = commutator_matrix(rho, Povm.vacuum(rho.dims[1]))
    return [w], {"commutator_matrix_vacuum_povm": cm.tolist()}


def _perturbation(cfg, tol):
    d = _dims(cfg)[0]
    prm = cfg["params"]
    alpha_bar = _complex(prm["alpha_bar"])
    rho_bar = thermal_state(float(prm["nbar"]), d)
    reports, rows = [], []
    for eps in prm["eps"]:
        eps = float(eps)
        rho = _checked(nowhere_dense_perturbation(rho_bar, alpha_bar, eps), tol)
        vac = nowhere_dense_perturbation(fock_ket(0, d).projector(), 0.0, eps)
        atom = coherent_ket(alpha_bar, d).projector()
        framed = displaced_frame(nowhere_dense_perturbation(atom, alpha_bar, eps), alpha_bar)
        q = mandel_q_witness(framed, tol)
        reports.append(criteria.WitnessReport(f"mandel_q[atomic,eps={eps!r}]", q.value,
                                              q.threshold, q.verdict, q.diagnostics))
        rows.append({"eps": eps, "mandel_q_thermal_displaced": mandel_q(rho),
                     "mandel_q_vacuum": mandel_q(vac), "mandel_q_atomic_frame": q.value})
    # CC perturbation of the two-mode vacuum: stays CC, marginal loses P-classicality
    vac2 = tensor(fock_ket(0, d).projector(), fock_ket(0, d).projector())
    eps0 = float(prm["eps"][0])
    pert = perturb_mode_a(vac2, 0.0, eps0)
    cc_ok, resid = is_cc_in_bases(pert, LocalBasis.fock(d), LocalBasis.fock(d))
    marg = mandel_q_witness(partial_trace(pert, 0), tol)
    reports.append(criteria.WitnessReport("mandel_q[two-mode-vacuum,marginal A]", marg.value,
                                          marg.threshold, marg.verdict, marg.diagnostics))
    return reports, {"rows": rows, "two_mode_vacuum_perturbation": {
        "eps": eps0, "is_cc_in_fock_bases": cc_ok, "offdiagonal_residual": resid}}


def _conditioning(cfg, tol):
    P = _fixture(cfg["params"])
    dims = _dims(cfg)
    rho = _checked(synthesize_state(P, dims), tol)
    elem = Povm.vacuum(dims[1]).elements[0]
    cond, prob = conditional_state(rho, elem, tol.get("min_probability", 1e-14))

    def response(z):
        k = coherent_ket(z, dims[1]).amps
        return float(np.real(k.conj() @ elem.mat @ k))

    P_cond, prob_p = conditional_P(P, response, mode=1)
    resyn = partial_trace(synthesize_state(P_cond, dims), 0)
    dist = trace_distance(cond, resyn)
    return [], {"probability": prob, "probability_from_P": prob_p, "trace_distance": dist,
                "conditional_p": P_cond.to_dict(),
                "conditional_p_positive": bool(np.all(P_cond.weights > 0)),
                "conditional_p_normalised": abs(float(P_cond.weights.sum()) - 1.0) <= 1e-12}


def _sweep(cfg, tol):
    n = int(cfg["params"]["draws"])
    seed = cfg["seed"]
    res = [sweeps.p_soundness_sweep(n, seed, samples=cfg["samples"]),
           sweeps.cc_soundness_sweep(n, seed),
           sweeps.p_to_c_separation_sweep(n, seed),
           sweeps.c_to_p_separation_sweep(n, seed)]
    return [], {"sweeps": [r.to_dict() for r in res]}


RUNNERS = {
    "number-correlated": _number_correlated,
    "gaussian-p": _gaussian_p,
    "point-mixture-commutator": _point_mixture_commutator,
    "perturbation": _perturbation,
    "conditioning": _conditioning,
    "sweep": _sweep,
}


# ----------------------------------------------------------- reports

def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def build_report(cfg: dict) -> dict:
    tol = {**DEFAULT_TOLERANCES, **{k: float(v) for k, v in cfg["tolerances"].items()}}
    reports, results = RUNNERS[cfg["scenario"]](cfg, tol)
    return _clean({
        "library": {"name": "nonclassical", "version": __version__},
        "config": cfg,
        "scenario": cfg["scenario"],
        "witnesses": [r.to_dict() for r in reports],
        "results": results,
    })


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scenario", "name", "value", "threshold", "verdict", "diagnostics"])
    for r in report["witnesses"]:
        w.writerow([report["scenario"], r["name"], repr(r["value"]), repr(r["threshold"]),
                    r["verdict"], json.dumps(r["diagnostics"], sort_keys=True)])
    for s in report["results"].get("sweeps", []):
        w.writerow([report["scenario"], s["name"], s["passed"], s["draws"],
                    "pass" if s["passed"] == s["draws"] else "fail",
                    json.dumps({"worst": s["worst"]})])
    return buf.getvalue()


def run(cfg: dict) -> str:
    """Execute a resolved config; write the report if an output path is set and return it."""
    text = render(build_report(cfg), cfg["output"]["format"])
    path = cfg["output"]["path"]
    if path:
        Path(path).write_text(text)
    return text


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nonclassical", description=__doc__.splitlines()[0])
    p.add_argument("--config", help=f"JSON config file (relative paths also searched in ${CONFIG_DIR_ENV})")
    p.add_argument("--scenario", choices=SCENARIOS)
    p.add_argument("--cutoff", type=int, help="Fock cutoff per mode")
    p.add_argument("--samples", type=int, help="Monte-Carlo sample count")
    p.add_argument("--seed", type=int)
    p.add_argument("--tolerance", action="append", metavar="KEY=VAL")
    p.add_argument("--param", action="append", metavar="KEY=JSON", help="scenario parameter")
    p.add_argument("--output", help="report path (stdout if omitted)")
    p.add_argument("--format", choices=("json", "csv"))
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        text = run(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalValidationError as exc:
        print(f"numerical validation failed: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: invalid scenario parameters: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not cfg["output"]["path"]:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())

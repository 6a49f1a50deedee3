"""Command-line front end.

Subcommands: check, hamiltonian, pde, simulate, converge, dispersion,
terms.  Every command reads one JSON config (--config), writes CSV or
JSON (--format / --output), and uses the exit-code contract

    0  success / constraints satisfied
    1  domain failure (constraint gate rejected, non-convergence input)
    2  usage or config parse error

Outputs are deterministic for a fixed config and seed: JSON is emitted
with sorted keys, CSV floats at 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import convergence as conv
from . import lattice as lat
from . import plastic as pl
from . import timelimit as tl
from .config import ConfigError, ExperimentConfig

__all__ = ["main"]

SCHEMA_VERSION = 1


def _emit(args, payload: dict, csv_rows: list[str] | None = None) -> None:
    """Write JSON (always available) or CSV (when rows are provided)."""
    fmt = args.format
    path = args.output
    if fmt == "csv" and csv_rows is not None:
        text = "\n".join(csv_rows) + "\n"
    else:
        payload = {"schema_version": SCHEMA_VERSION, **payload}
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _f17(x: float) -> str:
    return f"{x:.17g}"


def _load(args) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config)
    if args.seed is not None:
        cfg = ExperimentConfig.from_dict({**cfg.to_dict(), "seed": args.seed})
    return cfg


def _grid(n: int):
    ks = np.linspace(-np.pi, np.pi, n, endpoint=False)
    return ks[:, None], ks[None, :]


def cmd_check(args) -> int:
    cfg = _load(args)
    if cfg.walk.mode == "time":
        report = tl.check_time_limit(cfg.walk, l=cfg.l_index)
    else:
        report = pl.check_spacetime_limit(cfg.walk, cfg.a_exp, cfg.b_exp, l=cfg.l_index)
    _emit(args, report.to_dict())
    return 0 if report.passed else 1


def cmd_hamiltonian(args) -> int:
    cfg = _load(args)
    try:
        terms, symbol = tl.time_hamiltonian(cfg.walk)
    except ValueError as exc:
        sys.stderr.write(f"hamiltonian: {exc}\n")
        return 1
    summary = [f"H = sum of {len(terms)} shift-word terms, prefactor included in matrices:"]
    for t in terms:
        summary.append(f"  S_x^{t.px} S_y^{t.py} x {np.round(t.coeff, 12).tolist()}")
    _emit(args, {"terms": [t.to_dict() for t in terms], "rendered": summary})
    return 0


def cmd_pde(args) -> int:
    cfg = _load(args)
    if cfg.walk.mode != "plastic":
        sys.stderr.write("pde: requires a plastic-mode config\n")
        return 1
    try:
        assembly = pl.spacetime_hamiltonian(cfg.walk, cfg.a_exp, cfg.b_exp)
    except ValueError as exc:
        sys.stderr.write(f"pde: {exc}\n")
        return 1
    lam = assembly.calibration
    rendered = ["d/dt Psi = sum of the terms below (calibration folded in):"]
    for t in assembly.terms:
        mono = []
        if t.thx_power:
            mono.append(f"theta1x^{t.thx_power}")
        if t.thy_power:
            mono.append(f"theta1y^{t.thy_power}")
        if t.dx_power:
            mono.append(f"d/dx^{t.dx_power}")
        if t.dy_power:
            mono.append(f"d/dy^{t.dy_power}")
        coeff = np.round(lam * t.coeff, 12).tolist()
        rendered.append(f"  [{coeff}] " + " ".join(mono))
    _emit(args, {**assembly.to_dict(), "rendered": rendered})
    return 0


def cmd_simulate(args) -> int:
    cfg = _load(args)
    rng = np.random.default_rng(cfg.seed)
    init = cfg.initial.get("type", "plane_wave")
    if init == "plane_wave":
        state = lat.SpinorField.plane_wave(cfg.nx, cfg.ny,
                                           float(cfg.initial.get("kx", 0.0)),
                                           float(cfg.initial.get("ky", 0.0)))
    elif init == "delta":
        state = lat.SpinorField.delta(cfg.nx, cfg.ny)
    elif init == "random":
        state = lat.SpinorField.random(cfg.nx, cfg.ny, rng)
    else:
        sys.stderr.write(f"simulate: unknown initial state {init!r}\n")
        return 2
    norm0 = state.norm()
    for _ in range(cfg.steps):
        state = lat.step(state, cfg.walk, cfg.eps)
    drift = abs(state.norm() - norm0)
    field_file = None
    if args.output:
        lat.save_csv(state, args.output + ".field.csv")
        field_file = os.path.basename(args.output) + ".field.csv"
    _emit(args, {
        "steps": cfg.steps,
        "eps": cfg.eps,
        "norm_initial": norm0,
        "norm_final": state.norm(),
        "norm_drift": drift,
        "field_file": field_file,
    })
    return 0


def cmd_converge(args) -> int:
    cfg = _load(args)
    try:
        if cfg.walk.mode == "time":
            kx, ky = _grid(cfg.grid)
            result = conv.time_convergence(cfg.walk, cfg.t_final, kx, ky, cfg.eps_list)
        else:
            result = conv.spacetime_convergence(cfg.walk, cfg.a_exp, cfg.b_exp,
                                                cfg.t_final, cfg.momenta, cfg.eps_list)
    except ValueError as exc:
        sys.stderr.write(f"converge: {exc}\n")
        return 1
    rows = ["eps,error"] + [f"{_f17(e)},{_f17(err)}" for e, err in result.samples]
    _emit(args, result.to_dict(), csv_rows=rows)
    if args.format == "csv" and args.output:
        with open(args.output + ".json", "w") as fh:
            json.dump(result.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")
    return 0


def cmd_dispersion(args) -> int:
    cfg = _load(args)
    kx, ky = _grid(cfg.grid)
    bands = conv.dispersion(cfg.walk, cfg.eps, kx, ky)
    kxg = np.broadcast_to(kx, bands.shape[:-1])
    kyg = np.broadcast_to(ky, bands.shape[:-1])
    rows = ["kx,ky,phase1,phase2"]
    flat_rows = []
    for i in range(bands.shape[0]):
        for j in range(bands.shape[1]):
            rows.append(f"{_f17(kxg[i, j])},{_f17(kyg[i, j])},"
                        f"{_f17(bands[i, j, 0])},{_f17(bands[i, j, 1])}")
            flat_rows.append({"kx": kxg[i, j], "ky": kyg[i, j],
                              "phase1": bands[i, j, 0], "phase2": bands[i, j, 1]})
    _emit(args, {"eps": cfg.eps, "bands": flat_rows}, csv_rows=rows)
    return 0


def _term_group(idx: pl.TermIndex) -> str:
    kinds = [f"l={v}" for v in (idx.l1x, idx.l1y, idx.l2x, idx.l2y) if v]
    kinds += [f"n={v}" for v in (idx.n1x, idx.n1y, idx.n2x, idx.n2y) if v]
    return "+".join(sorted(kinds))


def cmd_terms(args) -> int:
    cfg = _load(args)
    try:
        terms = pl.enumerate_terms(cfg.a_exp, cfg.b_exp)
    except ValueError as exc:
        sys.stderr.write(f"terms: {exc}\n")
        return 1
    header = "l1x,l1y,l2x,l2y,n1x,n1y,n2x,n2y,sum_l,sum_n,group"
    rows = [header]
    listing = []
    for idx in terms:
        rows.append(",".join(str(v) for v in idx) + f",{idx.sum_l},{idx.sum_n},{_term_group(idx)}")
        listing.append({**idx._asdict(), "sum_l": idx.sum_l, "sum_n": idx.sum_n,
                        "group": _term_group(idx)})
    _emit(args, {"count": len(terms), "terms": listing}, csv_rows=rows)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plasticwalk",
        description="2D+1 quantum-walk continuum limits: constraint checks, "
                    "Hamiltonian/PDE emission, simulations, convergence runs.")
    parser.add_argument("--config", required=True, help="path to the JSON experiment config")
    parser.add_argument("--output", default=None, help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="json")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--threads", type=int, default=None,
                        help="accepted for compatibility; kernels are vectorized in-process")
    parser.add_argument("command",
                        choices=("check", "hamiltonian", "pde", "simulate",
                                 "converge", "dispersion", "terms"))

    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return 2

    handlers = {
        "check": cmd_check,
        "hamiltonian": cmd_hamiltonian,
        "pde": cmd_pde,
        "simulate": cmd_simulate,
        "converge": cmd_converge,
        "dispersion": cmd_dispersion,
        "terms": cmd_terms,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Batch command-line front end.

Four tools, one verb each run: ``phoncirc {tensor|slh|memory|pmmi} <verb>``.
Every run prints a JSON envelope ``{"manifest": ..., "result": ...}`` on
stdout; ``--output`` additionally writes the primary result (JSON or CSV)
to a file.  The manifest echoes the resolved parameters and the wall time;
everything else is deterministic for identical inputs.

Frequency-like inputs (kappa_e, r, detunings, band shifts) are ordinary
frequencies in Hz and are multiplied by 2*pi internally; delays are in ns.
Exit codes: 0 success, 1 computation error, 2 input validation error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__, circuits, elasticity, memory, slh
from .errors import (DimensionMismatch, DomainError, HistoryUnderrun,
                     InfeasibleCap, IntegrationError, NotUnitary, OutOfRange,
                     NonPhysicalDeformation, PortMismatch, ProfileOutOfRange,
                     SingularLoop)

_VALIDATION_ERRORS = (DomainError, OutOfRange, DimensionMismatch, PortMismatch,
                      json.JSONDecodeError, KeyError, ValueError, OSError)
_COMPUTATION_ERRORS = (SingularLoop, NotUnitary, IntegrationError, InfeasibleCap,
                       ProfileOutOfRange, HistoryUnderrun, NonPhysicalDeformation)


def _complex_json(m: np.ndarray) -> dict:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def _triplet_json(g: slh.SLHTriplet) -> dict:
    coeffs = slh.master_eq_coeffs(g)
    return {
        "n_ports": g.n_ports,
        "n_modes": g.n_modes,
        "S": _complex_json(g.S),
        "L": _complex_json(g.L),
        "H": _complex_json(g.H),
        "master_equation": {
            "drift": _complex_json(coeffs.drift),
            "input_coupling": _complex_json(coeffs.input_coupling),
        },
    }


def _parse_strain(text: str) -> np.ndarray:
    if text == "zeros":
        return np.zeros(6)
    value = json.loads(text)
    if not isinstance(value, list) or len(value) != 6:
        raise DomainError("strain must be a JSON list of 6 numbers or 'zeros'")
    return np.asarray(value, dtype=float)


def _load_moduli(path: str | None) -> elasticity.CubicModuli:
    return elasticity.SILICON if path is None else elasticity.CubicModuli.from_json(path)


def _parse_grid_ns(text: str) -> np.ndarray:
    """ "start:stop:step" in ns, inclusive of the stop point."""
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"grid must be start:stop:step, got {text!r}")
    start, stop, step = (float(p) for p in parts)
    if step <= 0.0 or stop < start:
        raise DomainError("grid needs step > 0 and stop >= start")
    n = int(round((stop - start) / step)) + 1
    return (start + step * np.arange(n)) * 1e-9


def _emit(args, result: dict, t0: float, csv_rows=None, csv_header: str = "") -> None:
    params = {k: v for k, v in vars(args).items() if k not in ("func", "tool", "verb")}
    if args.output:
        if csv_rows is not None:
            with open(args.output, "w") as fh:
                fh.write(csv_header + "\n")
                for row in csv_rows:
                    fh.write(",".join(f"{v:.12g}" for v in row) + "\n")
        else:
            with open(args.output, "w") as fh:
                json.dump(result, fh, indent=2, sort_keys=True)
                fh.write("\n")
        result = dict(result, output_path=args.output)
    envelope = {
        "manifest": {
            "command": f"{args.tool} {args.verb}",
            "parameters": params,
            "version": __version__,
            "wall_time_s": round(time.monotonic() - t0, 6),
        },
        "result": result,
    }
    json.dump(envelope, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


# --- tensor ------------------------------------------------------------------

def _cmd_tensor_energy(args, t0):
    s = _parse_strain(args.strain)
    moduli = _load_moduli(args.moduli)
    w = elasticity.strain_energy(s, moduli, order=args.order)
    _emit(args, {"strain": s.tolist(), "order": args.order,
                 "energy_density_j_per_m3": w}, t0)


def _cmd_tensor_phonoelastic(args, t0):
    s = _parse_strain(args.strain)
    m = elasticity.phonoelastic_matrix(s, _load_moduli(args.moduli))
    _emit(args, {"strain": s.tolist(), "matrix_pa": m.tolist()}, t0)


def _cmd_tensor_bond(args, t0):
    s = _parse_strain(args.strain)
    m = elasticity.phonoelastic_matrix(s, _load_moduli(args.moduli))
    rotated = elasticity.bond_rotate(m, args.xi)
    _emit(args, {"strain": s.tolist(), "xi_rad": args.xi,
                 "matrix_pa": rotated.tolist()}, t0)


# --- slh ----------------------------------------------------------------------

def _cmd_slh_compose(args, t0):
    with open(args.network) as fh:
        doc = json.load(fh)
    triplet = slh.run_network(doc)
    _emit(args, _triplet_json(triplet), t0)


# --- memory -------------------------------------------------------------------

def _cmd_memory_fidelity(args, t0):
    consts = memory.profile_constants(args.ratio)
    result = {"ratio": args.ratio, "a1": consts.a1, "a2": consts.a2,
              "tau_c": consts.tau_c}
    if args.kappa_e_hz is not None:
        result["t_c_s"] = memory.critical_time(args.ratio, 2 * math.pi * args.kappa_e_hz)
    _emit(args, result, t0)


def _profile_for(config: memory.TransferConfig):
    profile = memory.optimal_profile(config.ratio)
    if config.slope_cap is not None:
        profile = memory.discretize_profile(profile, slope_cap=config.slope_cap,
                                            horizon=config.horizon)
    return profile


def _cmd_memory_simulate(args, t0):
    config = memory.TransferConfig.from_json(args.config)
    profile = _profile_for(config)
    delayed = config.delta_f != 0.0 or config.delta_m != 0.0 or config.delta_c != 0.0
    run = memory.simulate_with_delay if delayed else memory.simulate_transfer
    res = run(config, profile)
    summary = {
        "fidelity": res.fidelity,
        "reflected_fraction": res.reflected_fraction,
        "intrinsic_fraction": res.intrinsic_fraction,
        "delayed": delayed,
        "horizon": config.horizon,
    }
    csv_rows = None
    if args.output:
        theta = np.asarray(profile.theta(res.tau), dtype=float)
        csv_rows = zip(res.tau, res.amplitude.real, res.amplitude.imag, theta)
    _emit(args, summary, t0, csv_rows=csv_rows,
          csv_header="tau_prime,re_A,im_A,theta")


def _cmd_memory_optimize(args, t0):
    config = memory.TransferConfig.from_json(args.config)
    profile = _profile_for(config)
    scan = memory.optimize_delays(config, profile,
                                  _parse_grid_ns(args.dm_grid),
                                  _parse_grid_ns(args.dc_grid))
    summary = {
        "delta_m_ns": scan.delta_m * 1e9,
        "delta_c_ns": scan.delta_c * 1e9,
        "fidelity": scan.fidelity,
    }
    csv_rows = None
    if args.output:
        csv_rows = [(dm * 1e9, dc * 1e9, scan.fidelity_grid[i, j])
                    for i, dm in enumerate(scan.dm_grid)
                    for j, dc in enumerate(scan.dc_grid)]
    _emit(args, summary, t0, csv_rows=csv_rows,
          csv_header="delta_m_ns,delta_c_ns,fidelity")


# --- pmmi ---------------------------------------------------------------------

def _read_unitary_csv(path: str) -> np.ndarray:
    rows = np.loadtxt(path, delimiter=",", ndmin=2)
    n = rows.shape[0]
    if rows.shape[1] != 2 * n:
        raise DomainError(f"unitary CSV must be N rows of 2N reals, got {rows.shape}")
    return rows[:, 0::2] + 1j * rows[:, 1::2]


def _cmd_pmmi_decompose(args, t0):
    u = _read_unitary_csv(args.unitary)
    plan = circuits.reck_decompose(u)
    err = float(np.max(np.abs(plan.matrix() - u)))
    result = json.loads(plan.to_json())
    result["reconstruction_error"] = err
    _emit(args, result, t0)


def _cmd_pmmi_apply(args, t0):
    with open(args.plan) as fh:
        plan = circuits.MeshPlan.from_json(fh.read())
    if args.input:
        row = np.loadtxt(args.input, delimiter=",", ndmin=2)
        if row.shape[0] != 1 or row.shape[1] != 2 * plan.n_modes:
            raise DomainError("input CSV must be one row of 2N reals (re, im)")
        x = row[0, 0::2] + 1j * row[0, 1::2]
    elif args.basis is not None:
        if not 0 <= args.basis < plan.n_modes:
            raise DomainError(f"basis index must lie in 0..{plan.n_modes - 1}")
        x = np.zeros(plan.n_modes, dtype=complex)
        x[args.basis] = 1.0
    else:
        raise DomainError("provide --input or --basis")
    y = circuits.mesh_apply(plan, x)
    _emit(args, {"output_re": y.real.tolist(), "output_im": y.imag.tolist()}, t0)


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phoncirc",
        description="Strain-tuned phononic circuit toolkit (frequencies in Hz, "
                    "converted to angular internally; delays in ns).")
    parser.add_argument("--version", action="version", version=__version__)
    tools = parser.add_subparsers(dest="tool", required=True)

    tensor = tools.add_parser("tensor", help="strain energy and stiffness tensors")
    tverbs = tensor.add_subparsers(dest="verb", required=True)
    for name, fn, extra in [
        ("energy", _cmd_tensor_energy, True),
        ("phonoelastic", _cmd_tensor_phonoelastic, False),
        ("bond", _cmd_tensor_bond, False),
    ]:
        sub = tverbs.add_parser(name)
        sub.add_argument("--strain", required=True,
                         help="JSON list of 6 Voigt strains (engineering shears) or 'zeros'")
        sub.add_argument("--moduli", help="JSON file overriding the Si moduli (Pa)")
        if extra:
            sub.add_argument("--order", choices=["second", "third"], default="third")
        if name == "bond":
            sub.add_argument("--xi", type=float, required=True,
                             help="rotation angle about [001], radians")
        sub.add_argument("--output", help="write the result JSON here")
        sub.set_defaults(func=fn)

    slh_p = tools.add_parser("slh", help="compose SLH networks")
    sverbs = slh_p.add_subparsers(dest="verb", required=True)
    compose = sverbs.add_parser("compose")
    compose.add_argument("--network", required=True,
                         help="JSON network description (nodes + script)")
    compose.add_argument("--output", help="write the result JSON here")
    compose.set_defaults(func=_cmd_slh_compose)

    mem = tools.add_parser("memory", help="state-transfer simulations")
    mverbs = mem.add_subparsers(dest="verb", required=True)
    fid = mverbs.add_parser("fidelity")
    fid.add_argument("--ratio", type=float, required=True, help="r / kappa_e")
    fid.add_argument("--kappa-e-hz", type=float, dest="kappa_e_hz",
                     help="report the critical time in seconds for this rate")
    fid.add_argument("--output", help="write the result JSON here")
    fid.set_defaults(func=_cmd_memory_fidelity)
    sim = mverbs.add_parser("simulate")
    sim.add_argument("--config", required=True, help="JSON transfer config")
    sim.add_argument("--output", help="write the trajectory CSV here")
    sim.set_defaults(func=_cmd_memory_simulate)
    opt = mverbs.add_parser("optimize")
    opt.add_argument("--config", required=True, help="JSON transfer config")
    opt.add_argument("--dm-grid", default="0:60:1", dest="dm_grid",
                     help="mirror lag grid, ns, as start:stop:step")
    opt.add_argument("--dc-grid", default="-60:0:1", dest="dc_grid",
                     help="detuning lag grid, ns, as start:stop:step")
    opt.add_argument("--output", help="write the scan CSV here")
    opt.set_defaults(func=_cmd_memory_optimize)

    pmmi = tools.add_parser("pmmi", help="interferometer mesh synthesis")
    pverbs = pmmi.add_subparsers(dest="verb", required=True)
    dec = pverbs.add_parser("decompose")
    dec.add_argument("--unitary", required=True,
                     help="CSV; N rows of 2N reals alternating re, im")
    dec.add_argument("--output", help="write the mesh plan JSON here")
    dec.set_defaults(func=_cmd_pmmi_decompose)
    app = pverbs.add_parser("apply")
    app.add_argument("--plan", required=True, help="mesh plan JSON file")
    app.add_argument("--input", help="CSV; one row of 2N reals alternating re, im")
    app.add_argument("--basis", type=int, help="0-based basis vector index")
    app.add_argument("--output", help="write the result JSON here")
    app.set_defaults(func=_cmd_pmmi_apply)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.monotonic()
    try:
        args.func(args, t0)
    except _COMPUTATION_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except _VALIDATION_ERRORS as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

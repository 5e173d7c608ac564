"""Command-line front end.

Subcommands delegate to the library: ``snr`` evaluates the closed forms,
``simulate`` runs the covariance engine on a built-in topology or a circuit
document, ``sweep``/``slope``/``wigner`` produce figure-level data,
``advantage-curve`` and ``fit`` drive the amplifier noise model.  Output is
a JSON result document (default) or a bare CSV table; identical flags and
seed produce identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .analysis import loss_plane, slope_vs_theta, to_db, wigner_panel
from .circuits import detect_stats, parse_circuit, simulate
from .elements import gain_from_qng
from .errors import GicircError
from .interferometers import (
    SisniParams,
    SqMziParams,
    engine_report,
    mean_signal_and_variance,
)
from .noise_fit import advantage_vs_qng, fit_noise_model, load_fit_data

RESULT_SCHEMA = "gicirc-result/1"
FORMAT_ENV = "GICIRC_FORMAT"
TWO_PI = 2.0 * math.pi


def _range_type(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad range {text!r}: {exc}") from exc
    if count < 1:
        raise argparse.ArgumentTypeError(f"range count must be >= 1, got {count}")
    return start, stop, count


def _linspace(rng) -> np.ndarray:
    start, stop, count = rng
    return np.linspace(start, stop, count)


def _add_output_args(sub):
    sub.add_argument("-o", "--output", default="-", help="output path ('-' = stdout)")
    sub.add_argument(
        "--format",
        choices=("json", "csv"),
        default=None,
        help=f"output format (default: ${FORMAT_ENV} or json)",
    )


def _add_topology_args(sub, *, losses=True):
    sub.add_argument("--topology", choices=("mzi", "sq-mzi", "sisni"))
    sub.add_argument("--alpha2", type=float, default=36.0, help="bright-port photon number |alpha|^2")
    sub.add_argument("--dphi", type=float, default=1e-3, help="phase excursion (rad)")
    sub.add_argument("--phi", type=float, default=math.pi, help="phase set point (rad)")
    sub.add_argument("--bs-t", type=float, default=0.5, help="beamsplitter transmission")
    sub.add_argument("--g", type=float, default=None, help="sq-mzi squeezer gain g")
    sub.add_argument("--qng-db", type=float, default=None, help="sq-mzi squeezer QNG (dB)")
    sub.add_argument("--g1", type=float, default=None, help="sisni upstream amplifier gain")
    sub.add_argument("--g2", type=float, default=None, help="sisni downstream amplifier gain")
    sub.add_argument("--qng1-db", type=float, default=None, help="sisni upstream QNG (dB)")
    sub.add_argument("--qng2-db", type=float, default=None, help="sisni downstream QNG (dB)")
    sub.add_argument("--phi-pump", type=float, default=math.pi, help="sisni pump phase (rad)")
    if losses:
        sub.add_argument("--l-i", type=float, default=0.0, help="sq-mzi internal loss")
        sub.add_argument("--l-is", type=float, default=0.0, help="sisni signal-arm internal loss")
        sub.add_argument("--l-ii", type=float, default=0.0, help="sisni idler-arm internal loss")
        sub.add_argument("--l-e", type=float, default=0.0, help="external loss")


def _gain(direct, qng_db, what: str) -> float:
    if direct is not None and qng_db is not None:
        raise ValueError(f"flag conflict: give either {what} or its QNG, not both")
    if qng_db is not None:
        return gain_from_qng(qng_db).g
    return 0.0 if direct is None else float(direct)


def _resolve_params(args, *, losses=True):
    if args.topology is None:
        raise ValueError("missing --topology (or --circuit where supported)")
    alpha = math.sqrt(args.alpha2)
    l_i = getattr(args, "l_i", 0.0) if losses else 0.0
    l_is = getattr(args, "l_is", 0.0) if losses else 0.0
    l_ii = getattr(args, "l_ii", 0.0) if losses else 0.0
    l_e = getattr(args, "l_e", 0.0) if losses else 0.0
    if args.topology == "sisni":
        return SisniParams(
            alpha=alpha,
            g1=_gain(args.g1, args.qng1_db, "--g1"),
            g2=_gain(args.g2, args.qng2_db, "--g2"),
            L_is=l_is,
            L_ii=l_ii,
            L_e=l_e,
            phi_signal=args.phi,
            phi_pump=args.phi_pump,
            T=args.bs_t,
        )
    if args.topology == "mzi":
        if any(v is not None for v in (args.g, args.qng_db)):
            raise ValueError("flag conflict: plain mzi takes no squeezer gain")
        g = 0.0
    else:
        g = _gain(args.g, args.qng_db, "--g")
    return SqMziParams(alpha=alpha, g=g, L_i=l_i, L_e=l_e, phi=args.phi, T=args.bs_t)


def _echo(args, keys) -> dict:
    out = {}
    for key in keys:
        value = getattr(args, key)
        if isinstance(value, tuple):
            value = list(value)
        out[key] = value
    return out


def _result_doc(command: str, parameters: dict, outputs: dict) -> dict:
    canonical = json.dumps(
        {"command": command, "parameters": parameters},
        sort_keys=True,
        separators=(",", ":"),
    )
    return {
        "schema_version": RESULT_SCHEMA,
        "command": {"name": command, "parameters": parameters},
        "outputs": outputs,
        "provenance": {
            "artifact_version": __version__,
            "parameter_hash": hashlib.sha256(canonical.encode()).hexdigest(),
        },
    }


def _fmt(value) -> str:
    if isinstance(value, float):
        return "%.12g" % value
    return str(value)


def _write(args, doc: dict, header, rows) -> int:
    fmt = args.format or os.environ.get(FORMAT_ENV, "json")
    if fmt == "json":
        payload = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        payload = buf.getvalue()
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    if args.output == "-":
        sys.stdout.write(payload)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)
    return 0


def _report_outputs(report, dphi: float, method: str) -> dict:
    return {
        "method": method,
        "dphi": dphi,
        "report": {
            "mean_X2": report.mean_X2,
            "var_X2": report.var_X2,
            "snr": report.snr,
            "snr_db": to_db(report.snr) if report.snr > 0 else None,
            "phase_variance": report.phase_variance,
            "detected_mode": report.detected_mode,
        },
    }


def _report_table(outputs: dict):
    rep = outputs["report"]
    header = list(rep.keys())
    return header, [tuple(rep[k] for k in header)]


_TOPOLOGY_KEYS = (
    "topology", "alpha2", "dphi", "phi", "bs_t",
    "g", "qng_db", "g1", "g2", "qng1_db", "qng2_db", "phi_pump",
)
_LOSS_KEYS = ("l_i", "l_is", "l_ii", "l_e")


def _cmd_snr(args) -> int:
    params = _resolve_params(args)
    report = mean_signal_and_variance(params, args.dphi)
    outputs = _report_outputs(report, args.dphi, "closed_form")
    doc = _result_doc("snr", _echo(args, _TOPOLOGY_KEYS + _LOSS_KEYS), outputs)
    return _write(args, doc, *_report_table(outputs))


def _cmd_simulate(args) -> int:
    if (args.circuit is None) == (args.topology is None):
        raise ValueError("flag conflict: give exactly one of --circuit or --topology")
    if args.circuit is not None:
        text = sys.stdin.read() if args.circuit == "-" else open(args.circuit, encoding="utf-8").read()
        spec = parse_circuit(text)
        state = simulate(spec)
        stats = detect_stats(spec, state)
        outputs = {
            "method": "engine",
            "stats": {
                "mode": spec.detect.mode,
                "theta": stats.theta,
                "mean": stats.mean,
                "variance": stats.variance,
            },
        }
        if args.full_state:
            outputs["state"] = {
                "mean": state.mean.tolist(),
                "cov": state.cov.tolist(),
            }
        doc = _result_doc("simulate", {"circuit": args.circuit}, outputs)
        st = outputs["stats"]
        header = list(st.keys())
        return _write(args, doc, header, [tuple(st[k] for k in header)])
    params = _resolve_params(args)
    report = engine_report(params, args.dphi)
    outputs = _report_outputs(report, args.dphi, "engine")
    doc = _result_doc("simulate", _echo(args, _TOPOLOGY_KEYS + _LOSS_KEYS), outputs)
    return _write(args, doc, *_report_table(outputs))


def _cmd_sweep(args) -> int:
    params = _resolve_params(args, losses=False)
    i_start, i_stop, i_count = args.internal
    e_start, e_stop, e_count = args.external
    grid = loss_plane(
        params,
        internal_range=(i_start, i_stop),
        external_range=(e_start, e_stop),
        resolution=(i_count, e_count),
        internal_target=args.internal_target,
    )
    outputs = {
        "quantity": "advantage_db",
        "y_axis": {"name": grid.y_axis.name, "start": grid.y_axis.start,
                   "stop": grid.y_axis.stop, "count": grid.y_axis.count},
        "x_axis": {"name": grid.x_axis.name, "start": grid.x_axis.start,
                   "stop": grid.x_axis.stop, "count": grid.x_axis.count},
        "values": grid.values.tolist(),
    }
    keys = _TOPOLOGY_KEYS + ("internal", "external", "internal_target")
    doc = _result_doc("sweep", _echo(args, keys), outputs)
    rows = [
        (yv, xv, grid.values[iy, ix])
        for iy, yv in enumerate(grid.y_axis.values)
        for ix, xv in enumerate(grid.x_axis.values)
    ]
    return _write(args, doc, ("internal_loss", "external_loss", "advantage_db"), rows)


def _cmd_slope(args) -> int:
    params = _resolve_params(args)
    thetas = _linspace(args.thetas)
    slopes = slope_vs_theta(params, thetas, args.dphi)
    outputs = {"theta": thetas.tolist(), "slope": slopes.tolist()}
    doc = _result_doc("slope", _echo(args, _TOPOLOGY_KEYS + _LOSS_KEYS + ("thetas",)), outputs)
    return _write(args, doc, ("theta", "slope"), list(zip(thetas, slopes)))


def _cmd_wigner(args) -> int:
    params = _resolve_params(args)
    panel = wigner_panel(
        params,
        _linspace(args.phis),
        _linspace(args.l_es),
        _linspace(args.xs),
        _linspace(args.ps),
    )
    outputs = {
        "phi_values": panel.phi_values.tolist(),
        "l_e_values": panel.L_e_values.tolist(),
        "x": panel.x.tolist(),
        "p": panel.p.tolist(),
        "density": panel.density.tolist(),
    }
    keys = _TOPOLOGY_KEYS + ("phis", "l_es", "xs", "ps")
    doc = _result_doc("wigner", _echo(args, keys), outputs)
    rows = [
        (phi, le, xv, pv, panel.density[i, j, ix, ip])
        for i, phi in enumerate(panel.phi_values)
        for j, le in enumerate(panel.L_e_values)
        for ix, xv in enumerate(panel.x)
        for ip, pv in enumerate(panel.p)
    ]
    return _write(args, doc, ("phi", "l_e", "x", "p", "density"), rows)


def _cmd_advantage_curve(args) -> int:
    qng2 = _linspace(args.qng2)
    curve = advantage_vs_qng(
        args.qng1_db,
        qng2,
        (args.l_is, args.l_ii, args.l_e),
        (args.rho1, args.eps1_sq),
        (args.rho2, args.eps2_sq),
        alpha2=args.alpha2,
        dphi=args.dphi,
    )
    outputs = {"qng1_db": args.qng1_db, "qng2_db": qng2.tolist(), "advantage_db": curve.tolist()}
    keys = ("qng1_db", "qng2", "l_is", "l_ii", "l_e", "rho1", "eps1_sq", "rho2", "eps2_sq", "alpha2", "dphi")
    doc = _result_doc("advantage-curve", _echo(args, keys), outputs)
    return _write(args, doc, ("qng2_db", "advantage_db"), list(zip(qng2, curve)))


def _cmd_fit(args) -> int:
    data = load_fit_data(args.data)
    result = fit_noise_model(
        data,
        losses=(args.l_is, args.l_ii, args.l_e),
        bounds=((0.0, args.rho_max), (1.0, args.eps2_max)),
        seed=args.seed,
        restarts=args.restarts,
        max_evals=args.max_evals,
        alpha2=args.alpha2,
        dphi=args.dphi,
    )
    outputs = {
        "fit": {
            "rho1": result.rho1,
            "rho2": result.rho2,
            "eps1_sq": result.eps1_sq,
            "eps2_sq": result.eps2_sq,
            "residual_rms": result.residual_rms,
            "iterations": result.iterations,
            "converged": result.converged,
        },
        "n_points": len(data),
    }
    keys = ("data", "seed", "restarts", "max_evals", "l_is", "l_ii", "l_e",
            "rho_max", "eps2_max", "alpha2", "dphi")
    doc = _result_doc("fit", _echo(args, keys), outputs)
    fit = outputs["fit"]
    header = list(fit.keys())
    return _write(args, doc, header, [tuple(fit[k] for k in header)])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gicirc",
        description="Gaussian-optics interferometer simulation and analysis.",
    )
    parser.add_argument("--version", action="version", version=f"gicirc {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("snr", help="closed-form SNR and phase variance")
    _add_topology_args(sub)
    _add_output_args(sub)
    sub.set_defaults(func=_cmd_snr)

    sub = subs.add_parser("simulate", help="run the covariance engine")
    sub.add_argument("--circuit", default=None, help="circuit document path ('-' = stdin)")
    sub.add_argument("--full-state", action="store_true", help="include output mean and covariance")
    _add_topology_args(sub)
    _add_output_args(sub)
    sub.set_defaults(func=_cmd_simulate)

    sub = subs.add_parser("sweep", help="advantage map over the loss plane")
    _add_topology_args(sub, losses=False)
    sub.add_argument("--internal", type=_range_type, default=(0.0, 0.9, 101),
                     help="internal loss range start:stop:count")
    sub.add_argument("--external", type=_range_type, default=(0.0, 0.9, 101),
                     help="external loss range start:stop:count")
    sub.add_argument("--internal-target", choices=("both", "signal", "idler"),
                     default="both", help="which internal loss the sweep drives (sisni)")
    _add_output_args(sub)
    sub.set_defaults(func=_cmd_sweep)

    sub = subs.add_parser("slope", help="signal slope versus local-oscillator angle")
    _add_topology_args(sub)
    sub.add_argument("--thetas", type=_range_type, default=(0.0, TWO_PI, 361),
                     help="angle grid start:stop:count (rad)")
    _add_output_args(sub)
    sub.set_defaults(func=_cmd_slope)

    sub = subs.add_parser("wigner", help="detected-mode Wigner density panels")
    _add_topology_args(sub)
    sub.add_argument("--phis", type=_range_type, default=(math.pi - 0.05, math.pi + 0.05, 3),
                     help="signal phase values start:stop:count")
    sub.add_argument("--l-es", type=_range_type, default=(0.0, 0.6, 3),
                     help="external loss values start:stop:count")
    sub.add_argument("--xs", type=_range_type, default=(-6.0, 6.0, 121))
    sub.add_argument("--ps", type=_range_type, default=(-6.0, 6.0, 121))
    _add_output_args(sub)
    sub.set_defaults(func=_cmd_wigner)

    sub = subs.add_parser("advantage-curve", help="noise-model advantage versus downstream QNG")
    sub.add_argument("--qng1-db", type=float, required=True)
    sub.add_argument("--qng2", type=_range_type, default=(0.5, 12.0, 24),
                     help="downstream QNG grid start:stop:count (dB)")
    sub.add_argument("--l-is", type=float, default=0.16)
    sub.add_argument("--l-ii", type=float, default=0.10)
    sub.add_argument("--l-e", type=float, default=0.15)
    sub.add_argument("--rho1", type=float, default=0.0)
    sub.add_argument("--eps1-sq", type=float, default=1.0)
    sub.add_argument("--rho2", type=float, default=0.0)
    sub.add_argument("--eps2-sq", type=float, default=1.0)
    sub.add_argument("--alpha2", type=float, default=36.0)
    sub.add_argument("--dphi", type=float, default=1e-3)
    _add_output_args(sub)
    sub.set_defaults(func=_cmd_advantage_curve)

    sub = subs.add_parser("fit", help="fit noise-model parameters to advantage data")
    sub.add_argument("--data", required=True, help="CSV with qng1_db,qng2_db,advantage_db[,sigma_db]")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--restarts", type=int, default=8)
    sub.add_argument("--max-evals", type=int, default=2000)
    sub.add_argument("--l-is", type=float, default=0.16)
    sub.add_argument("--l-ii", type=float, default=0.10)
    sub.add_argument("--l-e", type=float, default=0.15)
    sub.add_argument("--rho-max", type=float, default=0.1)
    sub.add_argument("--eps2-max", type=float, default=1e4)
    sub.add_argument("--alpha2", type=float, default=36.0)
    sub.add_argument("--dphi", type=float, default=1e-3)
    _add_output_args(sub)
    sub.set_defaults(func=_cmd_fit)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GicircError, ValueError, OSError) as exc:
        sys.stderr.write(
            json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}})
            + "\n"
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

    kep <delta|magosc|h2plus|perturb|td> [flags] [--config FILE] [--emit csv|json] [--output PATH]

Each subcommand writes one table. ``--config`` reads a JSON object whose keys
are flag names (``"order-xi"`` or ``"order_xi"``); flags given on the command
line win. Exit status: 0 on success, 2 for bad arguments, 3 for numerical
failures.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__, td
from .constants import TABLE1
from .errors import KepError, NumericalError
from .models import delta, h2plus, magosc
from .perturbation import harmonic_demo

OUTPUT_DIR_ENV = "KEP_OUTPUT_DIR"
SIG_DIGITS = 12


@dataclass
class Dataset:
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    meta: dict = field(default_factory=dict)


# -- emitters -----------------------------------------------------------------------------


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), f".{SIG_DIGITS}g")
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return float(format(v, f".{SIG_DIGITS}g")) if math.isfinite(v) else None
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    return v


def emit(data: Dataset, fmt: str) -> bytes:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(data.columns)
        for row in data.rows:
            w.writerow([_csv_cell(v) for v in row])
        return buf.getvalue().encode()
    if fmt == "json":
        obj = {"columns": data.columns, "rows": [_json_value(list(r)) for r in data.rows],
               "meta": _json_value(data.meta)}
        return (json.dumps(obj, indent=1, sort_keys=False, allow_nan=False) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")


# -- subcommands ----------------------------------------------------------------------------


def _delta(a) -> Dataset:
    if a.fig2:
        p = delta.DeltaParams(a.lam[0] if a.lam else 0.2, a.a, a.m)
        x = np.linspace(a.x_min, a.x_max, a.points)
        exact, kep = delta.wavefunctions_fig2(p, x)
        return Dataset(["x", "psi_exact", "psi_kep"], list(zip(x, exact, kep)))
    if a.fig1:
        lams = np.round(np.arange(1, 21) * 0.05, 12)
    else:
        lams = a.lam or [0.2]
    return Dataset(["lambda", "K_exact", "K_kep", "E_exact", "E_kep"], delta.scan_fig1(lams, a.a, a.m))


def _magosc(a) -> Dataset:
    p = magosc.MagOscParams(a.mu, a.omega, a.omegaL, a.N)
    if a.fig4:
        rho = np.linspace(0.0, a.rho_max, a.points)
        return Dataset(["N", "n", "rho", "psi_kep", "psi_exact"],
                       magosc.wavefunctions_fig4(p, a.n_max, tuple(a.fig4_N), rho))
    Ns = range(1, a.N + 1) if a.fig3 else [a.N]
    cols = ["N", "n", "E_kep", "E_exact", "rel_err", "E1n", "E2n"]
    rows = []
    for N in Ns:
        q = magosc.MagOscParams(a.mu, a.omega, a.omegaL, N)
        rows.extend(tuple(r[c] for c in cols) for r in magosc.kep_spectrum(q))
    return Dataset(cols, rows)


def _h2_params(a, R=2.0):
    return h2plus.H2Params(R, a.alpha, tuple(a.shells), a.order_xi, a.order_eta)


def _h2plus(a) -> Dataset:
    base = _h2_params(a)
    if a.table1:
        Rk, Ek = h2plus.equilibrium(base)
        Rl, El = h2plus.lcao_equilibrium()
        computed = {"LCAO-MO": (Rl, El), "KEP": (Rk, Ek)}
        rows = []
        for r in TABLE1:
            cR, cE = computed.get(r.method, (None, None))
            rows.append((r.method, r.R_e, r.E_e, cR, cE))
        return Dataset(["method", "R_e", "E_e", "R_e_computed", "E_e_computed"], rows)
    if a.fig6:
        x = np.linspace(a.x_min, a.x_max, a.points)
        rows = []
        for R in a.R or [1.0, 2.0]:
            p = _h2_params(a, R)
            rows.extend((R, xi, v) for xi, v in zip(x, h2plus.wavefunction_slice(p, x)))
        return Dataset(["R", "x", "psi"], rows)
    if a.curve:
        Rs = a.R or [float(r) for r in np.round(np.arange(1.0, 10.01, 0.5), 12)]
    else:
        Rs = a.R or [2.0]
    pts = h2plus.potential_curve(Rs, base, jobs=a.jobs)
    rows = [(c.R, c.alpha_used, c.E_electronic, c.E_total, h2plus.lcao_baseline(c.R)[0]) for c in pts]
    return Dataset(["R", "alpha", "E_electronic", "E_total", "E_lcao"], rows)


PERTURB_CASES = {"distorted": (1.0, 0.1, 0.0), "displaced": (1.0, 0.0, 0.1), "identical": (1.0, 0.0, 0.0)}


def _perturb(a) -> Dataset:
    k, dk, dx = PERTURB_CASES[a.case]
    k = k if a.k is None else a.k
    dk = dk if a.dk is None else a.dk
    dx = dx if a.dx is None else a.dx
    rec = harmonic_demo(k, dk, dx)
    return Dataset(["E_exact", "E_kep", "E0", "E0_plus_E1"], [rec.as_tuple()],
                   {"k": k, "dk": dk, "dx": dx})


def _td(a) -> Dataset:
    sys_ = td.delta_well_system(a.lam, a.a)
    c0 = np.zeros(sys_.dim)
    c0[a.start - 1] = 1.0
    traj = td.propagate(sys_, td.TdState(0.0, c0), a.periods * sys_.period, a.dt, a.sample_every)
    cols = ["t", "norm"] + [f"pop_{i + 1}" for i in range(sys_.dim)] + ["energy"]
    return Dataset(cols, traj.rows(), {"period": sys_.period})


# -- parser --------------------------------------------------------------------------------


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kep", description="Kinetic-energy-partition calculations.")
    ap.add_argument("--version", action="version", version=f"kep {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file of flag values")
        p.add_argument("--emit", choices=("csv", "json"), default="csv")
        p.add_argument("--output", help=f"output file (default stdout; relative paths honour ${OUTPUT_DIR_ENV})")
        p.add_argument("--seed", type=int, default=0, help="recorded in the metadata; no model is random")
        return p

    d = common(sub.add_parser("delta", help="double delta well"))
    d.add_argument("--lambda", dest="lam", type=float, nargs="+")
    d.add_argument("--a", type=float, default=1.0)
    d.add_argument("--m", type=float, default=1.0)
    d.add_argument("--fig1", action="store_true", help="lambda scan 0.05..1")
    d.add_argument("--fig2", action="store_true", help="wavefunctions on a grid")
    d.add_argument("--x-min", type=float, default=-4.0)
    d.add_argument("--x-max", type=float, default=4.0)
    d.add_argument("--points", type=_positive_int, default=161)
    d.set_defaults(run=_delta)

    m = common(sub.add_parser("magosc", help="oscillator in a magnetic field"))
    m.add_argument("--mu", type=float, default=1.0)
    m.add_argument("--omega", type=float, default=math.sqrt(2.0))
    m.add_argument("--omegaL", type=float, default=2.0)
    m.add_argument("--N", type=_positive_int, default=5)
    m.add_argument("--fig3", action="store_true", help="levels for every basis size 1..N")
    m.add_argument("--fig4", action="store_true", help="radial wavefunctions")
    m.add_argument("--fig4-N", type=_positive_int, nargs="+", default=[1, 3, 5])
    m.add_argument("--n-max", type=int, default=3)
    m.add_argument("--rho-max", type=float, default=3.0)
    m.add_argument("--points", type=_positive_int, default=61)
    m.set_defaults(run=_magosc)

    h = common(sub.add_parser("h2plus", help="hydrogen molecular ion"))
    h.add_argument("--R", type=float, nargs="+")
    h.add_argument("--alpha", type=float, help="fixed mass split (default: variational)")
    h.add_argument("--shells", type=_positive_int, nargs="+", default=[1, 2])
    h.add_argument("--order-xi", type=_positive_int, default=64)
    h.add_argument("--order-eta", type=_positive_int, default=64)
    h.add_argument("--curve", action="store_true", help="potential curve with LCAO baseline")
    h.add_argument("--fig6", action="store_true", help="axis wavefunction slices")
    h.add_argument("--table1", action="store_true", help="equilibrium table")
    h.add_argument("--x-min", type=float, default=-4.0)
    h.add_argument("--x-max", type=float, default=4.0)
    h.add_argument("--points", type=_positive_int, default=161)
    h.add_argument("--jobs", type=_positive_int, default=1)
    h.set_defaults(run=_h2plus)

    p = common(sub.add_parser("perturb", help="two-state oscillator benchmarks"))
    p.add_argument("--case", choices=sorted(PERTURB_CASES), default="distorted")
    p.add_argument("--k", type=float)
    p.add_argument("--dk", type=float)
    p.add_argument("--dx", type=float)
    p.set_defaults(run=_perturb)

    t = common(sub.add_parser("td", help="time-dependent propagation of the delta-well pair"))
    t.add_argument("--lambda", dest="lam", type=float, default=1.0)
    t.add_argument("--a", type=float, default=1.0)
    t.add_argument("--periods", type=float, default=10.0)
    t.add_argument("--dt", type=float)
    t.add_argument("--start", type=int, choices=(1, 2), default=1)
    t.add_argument("--sample-every", type=_positive_int, default=10)
    t.set_defaults(run=_td)
    return ap


def _subparser(ap: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in ap._subparsers._group_actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


_NOT_CONFIGURABLE = {"config", "help"}


def _config_defaults(sp: argparse.ArgumentParser, path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config must be a JSON object")
    keymap = {}
    for action in sp._actions:
        for opt in action.option_strings:
            key = opt.lstrip("-")
            if key not in _NOT_CONFIGURABLE:
                keymap[key] = action
                keymap[key.replace("-", "_")] = action
    out = {}
    unknown = [k for k in cfg if k not in keymap]
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for k, v in cfg.items():
        action = keymap[k]
        if action.type is not None and v is not None:
            v = [action.type(x) for x in v] if isinstance(v, list) else action.type(v)
        if action.choices is not None and v not in action.choices:
            raise ValueError(f"config {k}={v!r} not one of {list(action.choices)}")
        out[action.dest] = v
    return out


def parse(argv: Sequence[str]) -> argparse.Namespace:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.config:
        sp = _subparser(ap, args.command)
        sp.set_defaults(**_config_defaults(sp, args.config))
        args = ap.parse_args(argv)
    return args


def _meta(args) -> dict:
    skip = {"run", "config", "output", "emit"}
    params = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    return {"tool": "kep", "version": __version__, "params": params}


def _destination(path: str | None):
    if path is None or path == "-":
        return None
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse(argv)
    except SystemExit as e:
        return int(e.code or 0)
    except (ValueError, OSError, json.JSONDecodeError) as e:
        print(f"kep: error: {e}", file=sys.stderr)
        return 2
    try:
        data = args.run(args)
    except NumericalError as e:
        print(f"kep: numerical failure: {type(e).__name__}: {e}", file=sys.stderr)
        return 3
    except (KepError, ValueError) as e:
        print(f"kep: error: {e}", file=sys.stderr)
        return 2
    data.meta = {**_meta(args), **data.meta}
    blob = emit(data, args.emit)
    dest = _destination(args.output)
    try:
        if dest is None:
            sys.stdout.buffer.write(blob)
            sys.stdout.flush()
        else:
            dest.parent.mkdir(parents=True, exist_ok=True)
            dest.write_bytes(blob)
    except OSError as e:
        print(f"kep: cannot write output: {e}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

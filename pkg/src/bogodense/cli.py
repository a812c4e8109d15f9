"""Command-line front end: deterministic CSV/JSON emission.

Subcommands: ground, modes, dynamics, bdg, protocol, figure1.  Outputs use
trap units (lengths in r0, energies in hbar*omega, times in 1/omega) unless
--si is given.  With --output PATH the CSV table goes to PATH and a JSON
summary to the .json sidecar; without it, --format picks what lands on
stdout.  Floats are printed with 12 significant digits, so identical inputs
give byte-identical files.
"""

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, replace

import numpy as np

from .bdg import decompose_mode1, solve_bdg
from .errors import (
    BogodenseError,
    ConfigError,
    InapplicableLawError,
    UnsupportedRegimeError,
)
from .gpe import solve_gpe, thomas_fermi_mode
from .grid import default_grid
from .modes import build_xi1, coefficients
from .params import HBAR, PhysicalParams, to_dimensionless
from .protocol import (
    ProtocolConfig,
    gaussian_distribution,
    point_distribution,
    run_protocol,
    two_point_distribution,
)
from .twomode import build_h01, fock_state, mean_n1_analytic, mean_n1_trace, oscillation_law

_EPILOG = """\
physical constants:
  hbar is fixed to the 2018 CODATA value 1.054571817e-34 J s.

units:
  all output uses trap units (lengths in r0 = sqrt(hbar/(m*omega)), energies
  in hbar*omega, times in 1/omega, omega = 2*pi*trap-frequency) unless --si
  converts to metres, m^(-3/2) mode functions, joules, rad/s and seconds.

config file (--config PATH):
  flat `key = value` lines with # comments; keys are mass-kg,
  scattering-length-m, trap-frequency-hz, nbar, n0.  Flags override file
  values, file values override defaults.

environment:
  BOGODENSE_THREADS caps BLAS/OpenMP parallelism (set before launch);
  parallelism never changes output bytes.
"""

_DEFAULTS = {
    "mass-kg": 1.44e-25,
    "scattering-length-m": 1.0e-8,
    "trap-frequency-hz": 1000.0,
    "nbar": 1.0e5,
    "n0": 1.0e5,
}

_FILE_KEYS = tuple(_DEFAULTS)


@dataclass(frozen=True)
class RunConfig:
    physical: PhysicalParams
    n_points: int
    r_max: float
    tol: float
    max_iter: int
    output: str
    format: str
    si: bool
    command: str
    options: argparse.Namespace


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    phys = common.add_argument_group("physical parameters")
    phys.add_argument("--config", metavar="PATH", help="key = value config file")
    phys.add_argument("--mass-kg", type=float, help="atomic mass [kg]")
    phys.add_argument(
        "--scattering-length-m", type=float, help="s-wave scattering length [m]"
    )
    phys.add_argument(
        "--trap-frequency-hz", type=float, help="isotropic trap frequency [Hz]"
    )
    phys.add_argument("--nbar", type=float, help="mean total atom number")
    phys.add_argument("--n0", type=float, help="mean ground-mode occupation")
    num = common.add_argument_group("numerics")
    num.add_argument("--grid-points", type=int, default=4000, help="radial nodes")
    num.add_argument(
        "--r-max", type=float, default=None, help="grid extent [r0]; default fits the cloud"
    )
    num.add_argument("--tol", type=float, default=1e-8, help="ground-solver residual")
    num.add_argument("--max-iter", type=int, default=100000, help="solver iteration cap")
    out = common.add_argument_group("output")
    out.add_argument("--output", metavar="PATH", help="CSV path (+ .json sidecar)")
    out.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="stdout payload"
    )
    out.add_argument("--si", action="store_true", help="convert outputs to SI units")

    parser = argparse.ArgumentParser(
        prog="bogodense",
        description="Mean-density two-mode Bogoliubov dynamics of a trapped condensate",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ground", parents=[common], help="condensate mode xi0")
    p.add_argument("--tf", action="store_true", help="add the Thomas-Fermi column")

    sub.add_parser("modes", parents=[common], help="xi0, xi1 and coupling coefficients")

    p = sub.add_parser("dynamics", parents=[common], help="two-mode occupation traces")
    p.add_argument("--m-total", type=int, help="total atom number M (default round(nbar))")
    p.add_argument("--t-max", type=float, help="trace length [1/omega] (default one period)")
    p.add_argument("--steps", type=int, default=401, help="number of sample rows")
    p.add_argument(
        "--mode",
        choices=("exact", "analytic", "both"),
        default="both",
        help="which traces to emit",
    )

    p = sub.add_parser("bdg", parents=[common], help="quasiparticle spectrum")
    p.add_argument("--num-modes", type=int, default=8, help="modes to extract")
    p.add_argument("--dump-modes", metavar="PATH", help="write u_k, v_k profiles here")

    p = sub.add_parser("protocol", parents=[common], help="cyclic depletion protocol")
    p.add_argument("--cycles", type=int, default=200, help="number of cycles")
    p.add_argument(
        "--init",
        default="gaussian",
        help="gaussian[:mean,sigma] | point:M | twopoint:M1,M2 (default gaussian at n0)",
    )
    p.add_argument("--m-max", type=int, help="number-distribution cap")

    sub.add_parser(
        "figure1", parents=[common], help="mode profiles at the reference trap"
    )
    return parser


def _read_config_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    values = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected `key = value`, got {raw.strip()!r}")
        key = key.strip()
        val = val.strip()
        if key not in _FILE_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = float(val)
        except ValueError:
            raise ConfigError(
                f"{path}:{lineno}: malformed number for key {key!r}: {val!r}"
            ) from None
    return values


def parse_config(argv=None, file=None):
    """Parse flags (and optional config file) into a RunConfig.

    Precedence: flags, then file values, then built-in defaults.
    """
    args = _build_parser().parse_args(argv)
    path = file if file is not None else args.config
    file_values = _read_config_file(path) if path else {}

    def pick(key):
        flag = getattr(args, key.replace("-", "_"))
        if flag is not None:
            return flag
        return file_values.get(key, _DEFAULTS[key])

    physical = PhysicalParams(
        mass=pick("mass-kg"),
        scattering_length=pick("scattering-length-m"),
        trap_frequency=pick("trap-frequency-hz"),
        nbar=pick("nbar"),
        n0=pick("n0"),
    )
    return RunConfig(
        physical=physical,
        n_points=args.grid_points,
        r_max=args.r_max,
        tol=args.tol,
        max_iter=args.max_iter,
        output=args.output,
        format=args.format,
        si=args.si,
        command=args.command,
        options=args,
    )


def _fmt_cell(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def _csv_text(header, columns):
    lines = [",".join(header)]
    n_rows = len(columns[0])
    for i in range(n_rows):
        lines.append(",".join(_fmt_cell(col[i]) for col in columns))
    return "\n".join(lines) + "\n"


def _sanitize(obj):
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def _deliver(cfg, header, columns, summary):
    text = _csv_text(header, columns)
    payload = json.dumps(_sanitize(summary), indent=2, sort_keys=True)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        base, ext = os.path.splitext(cfg.output)
        sidecar = base + ".json"
        if sidecar == cfg.output:
            sidecar = cfg.output + ".summary.json"
        with open(sidecar, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    elif cfg.format == "json":
        sys.stdout.write(payload + "\n")
    else:
        sys.stdout.write(text)


def _ground_pipeline(cfg, nbar=None):
    physical = cfg.physical
    if nbar is not None and nbar != physical.nbar:
        physical = replace(physical, nbar=nbar)
    dp = to_dimensionless(physical)
    grid = default_grid(dp, n_points=cfg.n_points, r_max=cfg.r_max)
    gm = solve_gpe(dp, grid, tol=cfg.tol, max_iter=cfg.max_iter)
    return dp, grid, gm


def _length_scale(cfg, dp):
    return dp.r0 if cfg.si else 1.0


def _energy_scale(cfg):
    return HBAR * cfg.physical.omega if cfg.si else 1.0


def _cmd_ground(cfg):
    dp, grid, gm = _ground_pipeline(cfg)
    lr = _length_scale(cfg, dp)
    header = ["r", "xi0"]
    columns = [grid.nodes * lr, gm.xi0.values * lr**-1.5]
    if cfg.options.tf and dp.g > 0:
        tf = thomas_fermi_mode(dp, grid)
        header.append("xi0_tf")
        columns.append(tf.xi0.values * lr**-1.5)
    es = _energy_scale(cfg)
    summary = {
        "units": "si" if cfg.si else "trap",
        "mu": gm.mu * es,
        "nbar": gm.nbar,
        "residual": gm.residual,
        "iterations": gm.iterations,
    }
    _deliver(cfg, header, columns, summary)


def _coefficient_summary(coeffs, es):
    return {
        "alpha2": coeffs.alpha2,
        "alpha3": coeffs.alpha3,
        "alpha4": coeffs.alpha4,
        "beta": coeffs.beta,
        "gamma": coeffs.gamma * es,
        "mu1": coeffs.mu1 * es,
        "mu": coeffs.mu * es,
        "g01": coeffs.g01 * es,
    }


def _cmd_modes(cfg):
    dp, grid, gm = _ground_pipeline(cfg)
    m1 = build_xi1(gm)
    coeffs = coefficients(gm, m1, dp)
    lr = _length_scale(cfg, dp)
    header = ["r", "xi0", "xi1"]
    columns = [
        grid.nodes * lr,
        gm.xi0.values * lr**-1.5,
        m1.xi1.values * lr**-1.5,
    ]
    summary = {"units": "si" if cfg.si else "trap"}
    summary.update(_coefficient_summary(coeffs, _energy_scale(cfg)))
    _deliver(cfg, header, columns, summary)


def _cmd_dynamics(cfg):
    opts = cfg.options
    dp, grid, gm = _ground_pipeline(cfg)
    m1 = build_xi1(gm)
    coeffs = coefficients(gm, m1, dp)
    m_total = opts.m_total if opts.m_total is not None else round(cfg.physical.nbar)
    law = oscillation_law(coeffs, m_total)
    t_max = opts.t_max
    if t_max is None:
        if not law.stable:
            raise InapplicableLawError(
                f"oscillation law is unstable at M = {m_total}; supply --t-max"
            )
        t_max = 2.0 * math.pi / law.omega_prime
    if opts.steps < 2:
        raise ConfigError(f"--steps must be >= 2, got {opts.steps}")
    times = np.linspace(0.0, t_max, opts.steps)
    header = ["t"]
    omega = cfg.physical.omega
    columns = [times / omega if cfg.si else times]
    if opts.mode in ("exact", "both"):
        h = build_h01(coeffs, m_total)
        header.append("n1_exact")
        columns.append(mean_n1_trace(h, fock_state(m_total, 0), times))
    if opts.mode in ("analytic", "both"):
        if law.stable:
            header.append("n1_analytic")
            columns.append(mean_n1_analytic(law, times))
        elif opts.mode == "analytic":
            raise InapplicableLawError(
                f"oscillation law is unstable at M = {m_total}"
            )
    summary = {
        "units": "si" if cfg.si else "trap",
        "m_total": int(m_total),
        "c1": law.c1,
        "c2": law.c2,
        "omega_prime": law.omega_prime * (omega if cfg.si else 1.0),
        "stable": law.stable,
    }
    _deliver(cfg, header, columns, summary)


def _cmd_bdg(cfg):
    opts = cfg.options
    dp, grid, gm = _ground_pipeline(cfg)
    m1 = build_xi1(gm)
    spectrum = solve_bdg(gm, dp, num_modes=opts.num_modes)
    decomp = decompose_mode1(m1, spectrum)
    es = _energy_scale(cfg)
    freq_scale = cfg.physical.omega if cfg.si else 1.0
    k = np.arange(1, len(spectrum.modes) + 1)
    header = ["k", "omega_k", "p_k", "q_k"]
    columns = [k, spectrum.frequencies * freq_scale, decomp.p, decomp.q]
    summary = {
        "units": "si" if cfg.si else "trap",
        "frequencies": list(spectrum.frequencies * freq_scale),
        "p": list(decomp.p),
        "q": list(decomp.q),
        "residual": decomp.residual,
        "c_const": spectrum.c_const * es,
    }
    _deliver(cfg, header, columns, summary)
    if opts.dump_modes:
        lr = _length_scale(cfg, dp)
        dump_header = ["r"]
        dump_columns = [grid.nodes * lr]
        for i, mode in enumerate(spectrum.modes, 1):
            dump_header += [f"u_{i}", f"v_{i}"]
            dump_columns += [mode.u.values * lr**-1.5, mode.v.values * lr**-1.5]
        with open(opts.dump_modes, "w", encoding="utf-8") as fh:
            fh.write(_csv_text(dump_header, dump_columns))


def _parse_init(spec, n0):
    kind, _, rest = spec.partition(":")
    try:
        if kind == "gaussian":
            if rest:
                mean_s, _, sigma_s = rest.partition(",")
                mean, sigma = float(mean_s), float(sigma_s)
            else:
                mean, sigma = n0, math.sqrt(n0)
            m_max = int(math.ceil(mean + 6.0 * sigma))
            return ("gaussian", (mean, sigma), m_max)
        if kind == "point":
            m = int(rest)
            return ("point", (m,), m)
        if kind == "twopoint":
            m1_s, _, m2_s = rest.partition(",")
            m1, m2 = int(m1_s), int(m2_s)
            return ("twopoint", (m1, m2), max(m1, m2))
    except ValueError:
        raise ConfigError(f"malformed --init spec {spec!r}") from None
    raise ConfigError(
        f"unknown --init kind {kind!r} (want gaussian, point or twopoint)"
    )


def _cmd_protocol(cfg):
    opts = cfg.options
    n0 = cfg.physical.n0
    # The protocol works at its target occupation: every coefficient is
    # evaluated with nbar = n0.
    dp, grid, gm = _ground_pipeline(cfg, nbar=n0)
    m1 = build_xi1(gm)
    coeffs = coefficients(gm, m1, dp)
    kind, params, support_max = _parse_init(opts.init, n0)
    m_max = opts.m_max if opts.m_max is not None else support_max
    if m_max > 4000:
        raise UnsupportedRegimeError(
            f"protocol cap m_max = {m_max} exceeds the exact-evolution limit "
            "4000; run with a desk-scale --n0"
        )
    if kind == "gaussian":
        init = gaussian_distribution(*params, m_max=m_max)
    elif kind == "point":
        init = point_distribution(*params, m_max=m_max)
    else:
        init = two_point_distribution(*params, m_max=m_max)
    pcfg = ProtocolConfig(
        n0=n0, coeffs=coeffs, cycles=opts.cycles, m_max=m_max
    )
    result = run_protocol(init, pcfg)
    cycles = np.arange(result.means.size)
    header = ["cycle", "mean", "variance", "retained_mass", "lost_mass", "removed_this_cycle"]
    columns = [
        cycles,
        result.means,
        result.variances,
        result.retained_mass,
        result.lost_mass,
        result.removed,
    ]
    summary = {"n0": n0, "init": opts.init, "m_max": m_max}
    summary.update(result.summary())
    if cfg.si:
        summary["cycle_time"] = result.cycle_time / cfg.physical.omega
        summary["units"] = "si"
    else:
        summary["units"] = "trap"
    _deliver(cfg, header, columns, summary)


def _cmd_figure1(cfg):
    dp, grid, gm = _ground_pipeline(cfg)
    m1 = build_xi1(gm)
    coeffs = coefficients(gm, m1, dp)
    lr = _length_scale(cfg, dp)
    header = ["r", "xi0_numeric"]
    columns = [grid.nodes * lr, gm.xi0.values * lr**-1.5]
    if dp.g > 0:
        tf = thomas_fermi_mode(dp, grid)
        header.append("xi0_tf")
        columns.append(tf.xi0.values * lr**-1.5)
    header.append("xi1")
    columns.append(m1.xi1.values * lr**-1.5)
    es = _energy_scale(cfg)
    summary = {
        "units": "si" if cfg.si else "trap",
        "b_tf": dp.b_tf,
        "nbar": dp.nbar,
        "residual": gm.residual,
    }
    summary.update(_coefficient_summary(coeffs, es))
    _deliver(cfg, header, columns, summary)


_DISPATCH = {
    "ground": _cmd_ground,
    "modes": _cmd_modes,
    "dynamics": _cmd_dynamics,
    "bdg": _cmd_bdg,
    "protocol": _cmd_protocol,
    "figure1": _cmd_figure1,
}


def _report_error(exc, fmt):
    category = getattr(exc, "category", "io")
    if fmt == "json":
        payload = {"error": {"category": category, "message": str(exc)}}
        print(json.dumps(payload), file=sys.stderr)
    else:
        print(f"error [{category}]: {exc}", file=sys.stderr)


def main(argv=None):
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except BogodenseError as exc:
        _report_error(exc, "csv")
        return 1
    try:
        _DISPATCH[cfg.command](cfg)
    except (BogodenseError, OSError) as exc:
        _report_error(exc, cfg.format)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 1 invalid configuration, 2 numerical
non-convergence, 3 I/O failure.

Every subcommand accepts ``--config FILE``, a flat ``key = value`` file whose
keys are the long option names (dashes or underscores); flags given on the
command line override the file.  A ``mode`` key selects the subcommand when
none is given on the command line.
"""

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from importlib import metadata

import numpy as np

from . import classical, quantum_flux, special_fns
from .electron_states import ElectronState, FieldConfig, energy, field_for_beta_perp
from .errors import NonConvergenceError, VortexSRError

EXIT_OK, EXIT_CONFIG, EXIT_NONCONVERGENCE, EXIT_IO = 0, 1, 2, 3

SPECTRUM_COLUMNS = ["theta", "nu", "polarization", "emission_density", "L_flux_density", "power_density", "flags"]


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _version():
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _int_list(text):
    """'3', '1:5' (inclusive) or '1,2,7'."""
    text = str(text).strip()
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(t) for t in text.split(",") if t.strip()]


def _float_list(text):
    return [float(t) for t in str(text).split(",") if t.strip()]


# ---------------------------------------------------------------------------
# parser


def _add_grid(p):
    p.add_argument("--n-theta", type=int, default=91, help="number of grid angles")
    p.add_argument("--theta", type=_float_list, default=None, help="explicit comma-separated angles (rad)")
    p.add_argument("--no-poles", action="store_true", help="exclude theta = 0 and pi from the default grid")


def _add_output(p):
    p.add_argument("--output", "-o", default="-", help="output path ('-' for stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser():
    parser = _Parser(prog="vortex-sr", description="Angular momentum of synchrotron radiation.")
    parser.add_argument("--version", action="version", version=_version())
    sub = parser.add_subparsers(dest="mode")

    ev = sub.add_parser("eval", help="evaluate a special function")
    ev.add_argument("function", nargs="?", default=None, choices=["laguerre", "laguerre-poly", "bessel"])
    ev.add_argument("--n", type=int, default=None)
    ev.add_argument("--s", type=int, default=0, help="second index; the degree for laguerre-poly")
    ev.add_argument("--l", type=int, default=0, help="upper index of the Laguerre polynomial")
    ev.add_argument("--nu", type=int, default=0)
    ev.add_argument("--x", type=float, required=False, default=None)

    qs = sub.add_parser("quantum-spectrum", help="per-steradian quantum spectrum")
    qs.add_argument("--b", type=float, default=None, help="field in units of the critical field")
    qs.add_argument("--beta-perp", type=float, default=None, help="set b so that level n has this speed")
    qs.add_argument("--n", type=int, required=False, default=None)
    qs.add_argument("--s", type=int, default=0)
    qs.add_argument("--kz", type=float, default=0.0)
    qs.add_argument("--zeta", type=int, default=1, choices=[1, -1])
    qs.add_argument("--harmonics", type=_int_list, default=None, help="e.g. 1:5 or 1,2,3")
    qs.add_argument("--polarization", choices=["+", "-", "both"], default="both")
    qs.add_argument("--spin-mode", choices=list(quantum_flux.SPIN_MODES), default="average")
    qs.add_argument("--tol", type=float, default=1e-14)
    _add_grid(qs)
    _add_output(qs)

    cs = sub.add_parser("classical-spectrum", help="per-steradian classical-limit spectrum")
    cs.add_argument("--beta-perp", "--beta", dest="beta_perp", type=float, default=None)
    cs.add_argument("--beta-par", type=float, default=0.0)
    cs.add_argument("--omega0", type=float, default=1.0)
    cs.add_argument("--e2", type=float, default=1.0)
    cs.add_argument("--harmonics", type=_int_list, default=_int_list("1:5"))
    cs.add_argument("--polarization", choices=["+", "-", "both"], default="both")
    _add_grid(cs)
    _add_output(cs)

    cl = sub.add_parser("compare-limits", help="quantum vs classical-limit flux densities")
    cl.add_argument("--n", type=int, default=None)
    cl.add_argument("--s", type=int, default=0)
    cl.add_argument("--beta-perp", type=float, default=None)
    cl.add_argument("--b", type=float, default=None)
    cl.add_argument("--harmonics", type=_int_list, default=_int_list("1:5"))
    cl.add_argument("--spin-mode", choices=list(quantum_flux.SPIN_MODES), default="average")
    _add_grid(cl)
    _add_output(cl)

    ct = sub.add_parser("compare-tensors", help="symmetrized vs canonical angular-momentum flux")
    ct.add_argument("--beta", type=float, default=None)
    ct.add_argument("--nu-max", type=int, default=None)
    ct.add_argument("--tol", type=float, default=1e-10)
    ct.add_argument("--omega0", type=float, default=1.0)
    ct.add_argument("--e2", type=float, default=1.0)
    ct.add_argument("--density-harmonics", type=_int_list, default=_int_list("1:3"))
    _add_grid(ct)
    _add_output(ct)

    for p in (ev, qs, cs, cl, ct):
        p.add_argument("--config", default=None, help="flat key = value configuration file")
    parser._subs = {"eval": ev, "quantum-spectrum": qs, "classical-spectrum": cs,
                    "compare-limits": cl, "compare-tensors": ct}
    return parser


def read_config_file(path):
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    values = {}
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{num}: expected key = value")
        key, value = (t.strip() for t in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _apply_file(sub, values):
    """Install file values as subcommand defaults, so explicit flags win."""
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, raw in values.items():
        if key in ("mode", "config"):
            continue
        action = known.get(key)
        if action is None:
            raise ConfigError(f"unknown config key {key!r}")
        if isinstance(action, argparse._StoreTrueAction):
            value = raw.lower() in ("1", "true", "yes", "on")
        else:
            try:
                value = action.type(raw) if action.type else raw
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc
        if action.choices is not None and value not in action.choices:
            raise ConfigError(f"{key} must be one of {list(action.choices)}, got {raw!r}")
        defaults[key] = value
    sub.set_defaults(**defaults)


def parse_args(argv):
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    argv = list(argv)
    if known.config is not None:
        values = read_config_file(known.config)
        modes = [tok for tok in argv if tok in parser._subs]
        if not modes:
            if "mode" not in values:
                raise ConfigError("no mode given on the command line or in the config file")
            if values["mode"] not in parser._subs:
                raise ConfigError(f"unknown mode {values['mode']!r}")
            argv.insert(0, values["mode"])
            modes = [values["mode"]]
        _apply_file(parser._subs[modes[0]], values)
    return parser.parse_args(argv)


# ---------------------------------------------------------------------------
# output


def _params_of(args):
    skip = {"output", "format", "config"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        if isinstance(value, list):
            value = ",".join(_fmt(v) for v in value)
        out[key] = value
    return out


def _config_hash(params):
    blob = json.dumps({k: _fmt(v) if v is not None else None for k, v in params.items()}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


class Table:
    def __init__(self, columns, rows, diagnostics=None):
        self.columns = columns
        self.rows = rows
        self.diagnostics = diagnostics or {}


def render(table, params, fmt):
    version = _version()
    chash = _config_hash(params)
    if fmt == "json":
        rows = [dict(zip(table.columns, (_json_value(v) for v in row))) for row in table.rows]
        doc = {
            "version": version,
            "config_hash": chash,
            "config": {k: _json_value(v) for k, v in params.items()},
            "diagnostics": {k: _json_value(v) for k, v in sorted(table.diagnostics.items())},
            "columns": table.columns,
            "rows": rows,
        }
        return json.dumps(doc, indent=1, sort_keys=False) + "\n"
    buf = io.StringIO()
    buf.write(f"# vortex-sr {version}\n# config_hash = {chash}\n")
    for key, value in params.items():
        buf.write(f"# {key} = {_fmt(value) if value is not None else ''}\n")
    for key, value in sorted(table.diagnostics.items()):
        buf.write(f"# diagnostic {key} = {_fmt(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else _fmt(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


def _write(text, path):
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# modes


def _grid(args):
    if args.theta is not None:
        theta = np.unique(np.asarray(args.theta, dtype=float))
    else:
        if args.n_theta < 1:
            raise ConfigError("n-theta must be >= 1")
        if args.no_poles:
            theta = np.linspace(0.0, math.pi, args.n_theta + 2)[1:-1]
        else:
            theta = np.linspace(0.0, math.pi, args.n_theta) if args.n_theta > 1 else np.array([0.0])
    if theta.size == 0 or np.any((theta < 0) | (theta > math.pi)):
        raise ConfigError("theta grid must be nonempty and within [0, pi]")
    return theta


def _pols(choice):
    return [(0, "+"), (1, "-")] if choice == "both" else [(0 if choice == "+" else 1, choice)]


def _field_for(args, n):
    if args.b is not None:
        return FieldConfig(b=args.b)
    if args.beta_perp is not None:
        if n < 1:
            raise ConfigError("beta-perp needs n >= 1")
        return FieldConfig(b=field_for_beta_perp(n, args.beta_perp))
    raise ConfigError("either --b or --beta-perp is required")


def _flags(theta, allowed):
    flags = []
    if not allowed:
        flags.append("forbidden")
    if theta in (0.0, math.pi):
        flags.append("pole")
    return "|".join(flags)


def run_eval(args):
    if args.function is None or args.x is None:
        raise ConfigError("eval needs a function name and --x")
    if args.function == "laguerre":
        value = special_fns.laguerre_function(args.n or 0, args.s, args.x)
    elif args.function == "laguerre-poly":
        if args.n is not None:
            raise ConfigError("laguerre-poly takes its degree from --s and upper index from --l")
        value = special_fns.generalized_laguerre(args.s, args.l, args.x)
    else:
        value = special_fns.bessel_j(args.nu, args.x)
    return format(float(value), ".12g") + "\n"


def run_quantum_spectrum(args):
    if args.n is None or args.n < 0 or args.s < 0:
        raise ConfigError("--n >= 0 and --s >= 0 are required")
    if not args.tol > 0:
        raise ConfigError("tol must be positive")
    theta = _grid(args)
    cfg = _field_for(args, args.n) if args.n > 0 or args.b is not None else FieldConfig(b=1.0)
    state = ElectronState(args.n, args.s, args.kz, args.zeta)
    harmonics = args.harmonics
    if harmonics is not None:
        harmonics = [h for h in harmonics if 1 <= h <= args.n]
    spec = quantum_flux.spectrum_table(state, cfg, theta=theta, harmonics=harmonics,
                                       spin_mode=args.spin_mode, tol=args.tol)
    rows = []
    for i, nu in enumerate(spec.harmonics):
        for j, th in enumerate(spec.theta):
            for p, label in _pols(args.polarization):
                rows.append([th, int(nu), label, spec.emission[i, p, j], spec.flux[i, p, j],
                             spec.power[i, p, j], _flags(th, spec.allowed[i, j])])
    diag = {"b": cfg.b, "n_harmonics": len(spec.harmonics), "energy": energy(state, cfg)}
    return Table(SPECTRUM_COLUMNS, rows, diag)


def run_classical_spectrum(args):
    if args.beta_perp is None:
        raise ConfigError("--beta-perp is required")
    p = classical.ClassicalParams(args.beta_perp, args.beta_par, args.omega0, args.e2)
    theta = _grid(args)
    rows = []
    for nu in args.harmonics:
        if nu < 1:
            raise ConfigError("harmonics must be >= 1")
        for p_idx, label in _pols(args.polarization):
            flux = np.atleast_1d(classical.classical_flux_density(p, nu, theta, label, per_solid_angle=True))
            # one photon of harmonic nu carries nu units of angular momentum
            emission = flux / nu
            power = emission * nu * p.omega0 / (1.0 - p.beta_par * np.cos(theta))
            for j, th in enumerate(theta):
                rows.append([th, nu, label, emission[j], flux[j], power[j], _flags(th, True)])
    rows.sort(key=lambda r: (r[1], r[0], r[2] != "+"))
    return Table(SPECTRUM_COLUMNS, rows)


def run_compare_limits(args):
    if args.n is None or args.n < 1:
        raise ConfigError("--n >= 1 is required")
    cfg = _field_for(args, args.n)
    state = ElectronState(args.n, args.s, 0.0, 1)
    E = energy(state, cfg)
    beta = 2.0 * math.sqrt(cfg.gamma * args.n) / E
    p = classical.ClassicalParams(beta, 0.0, cfg.omega0(E), cfg.e2)
    theta = _grid(args)
    rows = []
    worst = {}
    for nu in args.harmonics:
        if not 1 <= nu <= args.n:
            raise ConfigError(f"harmonic {nu} not available for n={args.n}")
        q = quantum_flux.harmonic_density(state, nu, theta, cfg, args.spin_mode, per_solid_angle=True).flux.sum(axis=0)
        c = np.atleast_1d(classical.classical_flux_density(p, nu, theta, "sum", per_solid_angle=True))
        scale = np.max(np.abs(c))
        for j, th in enumerate(theta):
            rel = abs(q[j] - c[j]) / scale if scale > 0 else 0.0
            rows.append([th, nu, q[j], c[j], rel])
        worst[f"max_rel_deviation_nu{nu}"] = float(np.max(np.abs(q - c)) / scale) if scale > 0 else 0.0
    worst["beta_perp"] = beta
    worst["b"] = cfg.b
    return Table(["theta", "nu", "quantum_L_flux_density", "classical_L_flux_density", "rel_deviation"], rows, worst)


def run_compare_tensors(args):
    if args.beta is None:
        raise ConfigError("--beta is required")
    if not args.tol > 0:
        raise ConfigError("tol must be positive")
    sym = classical.symmetrized_total(args.beta, args.nu_max, args.tol, args.omega0, args.e2)
    can = classical.canonical_total(args.beta, args.nu_max, args.tol, args.omega0, args.e2)
    p = classical.ClassicalParams(args.beta, 0.0, args.omega0, args.e2)
    rows = []
    theta = _grid(args)
    for nu in args.density_harmonics:
        s = np.atleast_1d(classical.symmetrized_density(p, nu, theta))
        d = classical.canonical_densities(p, nu, theta)
        orb, spin = np.atleast_1d(d.orbital), np.atleast_1d(d.spin)
        for j, th in enumerate(theta):
            rows.append(["density", th, nu, s[j], orb[j], spin[j], orb[j] + spin[j], ""])
    n_common = min(len(sym.harmonics), len(can.harmonics))
    worst = 0.0
    for i in range(n_common):
        a, b = sym.flux[i, 0], can.flux[i, 0]
        res = abs(a - b) / abs(b) if b else 0.0
        worst = max(worst, res)
        rows.append(["harmonic", "", i + 1, a, "", "", b, res])
    total_res = abs(sym.total_flux - can.total_flux) / abs(can.total_flux) if can.total_flux else 0.0
    rows.append(["total", "", "", sym.total_flux, "", "", can.total_flux, total_res])
    diag = {
        "residual_total": total_res,
        "residual_max_harmonic": worst,
        "tail_symmetrized": sym.tail_estimate,
        "tail_canonical": can.tail_estimate,
        "harmonics_used": n_common,
    }
    cols = ["record", "theta", "nu", "symmetrized", "canonical_orbital", "canonical_spin", "canonical", "residual"]
    return Table(cols, rows, diag)


_RUNNERS = {
    "quantum-spectrum": run_quantum_spectrum,
    "classical-spectrum": run_classical_spectrum,
    "compare-limits": run_compare_limits,
    "compare-tensors": run_compare_tensors,
}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
        if args.mode is None:
            raise ConfigError("a mode is required: " + ", ".join(["eval"] + list(_RUNNERS)))
        if args.mode == "eval":
            text = run_eval(args)
        else:
            table = _RUNNERS[args.mode](args)
            text = render(table, _params_of(args), args.format)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (VortexSRError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        _write(text, getattr(args, "output", "-"))
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""``vacpol`` command line: potential tables and the verification suite.

Subcommands::

    vacpol point   [options]     point-nucleus Uehling potential
    vacpol fermi   [options]     Fermi-nucleus Uehling potential
    vacpol ks      [options]     Fermi-nucleus Kallen-Sabry potential
    vacpol table   [options]     any of the above, chosen by --method
    vacpol verify  [suite]       self-verification report

Lengths on the command line: radii in bohr, nuclear sizes in fm.
Precedence of settings: flags, then ``VACPOL_TOL`` (tolerance only), then
the ``--config`` file, then built-in defaults.

Exit codes: 0 success, 1 verification failure, 2 bad input.
"""

import argparse
import math
import os
import sys
import warnings
from dataclasses import dataclass, fields, replace
from functools import partial

from . import __version__
from .errors import DomainError, RegimeWarning
from .fermi_nucleus import BOHR_FM, DEFAULT_T_FM, DEFAULT_XI, fm_to_bohr, make_fermi
from .kallen_sabry import ks_potential
from .specfun import AccuracyControl
from .tables import make_grid, tabulate
from .uehling_fermi import uehling_fermi
from .uehling_point import Method, uehling_point
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

POINT_METHODS = tuple(m.value for m in Method)
FERMI_METHODS = ("direct", "sommerfeld")
KS_METHODS = ("ks_table",)
DEFAULT_METHOD = {"point": "bickley", "fermi": "direct", "ks": "ks_table", "table": "bickley"}


class UsageError(Exception):
    """Bad flag value or config entry (exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    """Settings of a table run; nuclear sizes in fm, radii in bohr.

    ``a_fm``, when given, overrides the diffuseness derived from ``t_fm``.
    """

    Z: float = 1.0
    xi_fm: float = DEFAULT_XI * BOHR_FM
    t_fm: float = DEFAULT_T_FM
    a_fm: float = None
    r_min: float = 1e-5
    r_max: float = 0.05
    points: int = 20
    grid: str = "log"
    method: str = None
    format: str = "csv"
    tol: float = 1e-12
    jobs: int = 1

    def validate(self):
        for name in ("Z", "xi_fm", "t_fm", "r_min", "r_max"):
            v = getattr(self, name)
            if not (v > 0.0 and math.isfinite(v)):
                raise UsageError(f"{name} must be positive and finite, got {v!r}")
        if self.a_fm is not None and not (self.a_fm > 0.0 and math.isfinite(self.a_fm)):
            raise UsageError(f"a_fm must be positive, got {self.a_fm!r}")
        if not self.r_min < self.r_max:
            raise UsageError(f"r_min ({self.r_min!r}) must be below r_max ({self.r_max!r})")
        if self.points < 2:
            raise UsageError(f"points must be >= 2, got {self.points!r}")
        if self.grid not in ("linear", "log"):
            raise UsageError(f"grid must be linear or log, got {self.grid!r}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, got {self.format!r}")
        if not 0.0 < self.tol <= 1e-3:
            raise UsageError(f"tol must lie in (0, 1e-3], got {self.tol!r}")
        if self.jobs < 1:
            raise UsageError(f"jobs must be >= 1, got {self.jobs!r}")
        return self

    def nuclear_lengths(self):
        """``(xi, a)`` in bohr; the only place fm are converted."""
        a_fm = self.a_fm if self.a_fm is not None else self.t_fm / (4.0 * math.log(3.0))
        return fm_to_bohr(self.xi_fm), fm_to_bohr(a_fm)

    def params(self):
        return tuple((f.name, getattr(self, f.name)) for f in fields(self))


_CASTS = {"Z": float, "xi_fm": float, "t_fm": float, "a_fm": float, "r_min": float, "r_max": float,
          "points": int, "grid": str, "method": str, "format": str, "tol": float, "jobs": int}


def _cast(key, raw, origin):
    try:
        return _CASTS[key](raw)
    except (TypeError, ValueError):
        raise UsageError(f"{origin}: bad value {raw!r} for {key}") from None


def read_config(path):
    """Parse ``key=value`` lines; ``#`` starts a comment, dashes equal underscores."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key = key.strip().replace("-", "_")
        if key.lower() == "z":
            key = "Z"
        if not sep or key not in _CASTS:
            raise UsageError(f"{path}:{lineno}: expected key=value with key in {sorted(_CASTS)}")
        out[key] = _cast(key, val.strip(), f"{path}:{lineno}")
    return out


def build_config(args, command, environ=None):
    """Merge defaults, config file, ``VACPOL_TOL`` and explicit flags."""
    environ = os.environ if environ is None else environ
    values = {}
    if getattr(args, "config", None):
        values.update(read_config(args.config))
    if environ.get("VACPOL_TOL"):
        values["tol"] = _cast("tol", environ["VACPOL_TOL"], "VACPOL_TOL")
    for key in _CASTS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    cfg = replace(RunConfig(), **values)
    if cfg.method is None:
        cfg = replace(cfg, method=DEFAULT_METHOD[command])
    return cfg.validate()


# row evaluators live at module level so worker processes can unpickle them

def _eval_point(r, Z, method, ctrl):
    return uehling_point(r, Z, method, ctrl=ctrl, full_output=True)


def _eval_fermi(r, d, method, ctrl):
    return uehling_fermi(r, d, method, ctrl, full_output=True)


def _eval_ks(r, d, ctrl):
    return ks_potential(r, d, ctrl, full_output=True)


def _family(method):
    if method in POINT_METHODS:
        return "point"
    if method in FERMI_METHODS:
        return "fermi"
    if method in KS_METHODS:
        return "ks"
    raise UsageError(f"unknown method {method!r}; choose from "
                     f"{POINT_METHODS + FERMI_METHODS + KS_METHODS}")


def _table_for(kind, cfg):
    family = _family(cfg.method)
    if kind != "table" and family != kind:
        raise UsageError(f"method {cfg.method!r} does not belong to the {kind} command")
    ctrl = AccuracyControl(rel_tol=cfg.tol)
    radii = make_grid(cfg.r_min, cfg.r_max, cfg.points, cfg.grid)
    if family == "point":
        evaluate = partial(_eval_point, Z=cfg.Z, method=cfg.method, ctrl=ctrl)
    else:
        xi, a = cfg.nuclear_lengths()
        d = make_fermi(cfg.Z, xi, a)
        evaluate = (partial(_eval_fermi, d=d, method=cfg.method, ctrl=ctrl) if family == "fermi"
                    else partial(_eval_ks, d=d, ctrl=ctrl))
    return tabulate(family, evaluate, radii, cfg.Z, jobs=cfg.jobs, params=cfg.params())


def cmd_point(cfg):
    return _table_for("point", cfg)


def cmd_fermi(cfg):
    return _table_for("fermi", cfg)


def cmd_ks(cfg):
    return _table_for("ks", cfg)


def cmd_verify(suite="all", tol_scale=1.0):
    return run_suite(suite, tol_scale)


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not (v > 0.0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return v


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be >= 1")
    return v


def build_parser():
    parser = argparse.ArgumentParser(prog="vacpol", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"vacpol {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--Z", dest="Z", type=_positive_float, help="nuclear charge (default 1)")
    common.add_argument("--xi-fm", dest="xi_fm", type=_positive_float,
                        help="half-density radius in fm (default 1.2000 fm = 2.2677e-5 bohr)")
    common.add_argument("--t-fm", dest="t_fm", type=_positive_float,
                        help="90%%-10%% surface thickness in fm (default 2.3)")
    common.add_argument("--a-fm", dest="a_fm", type=_positive_float, help="diffuseness in fm, overrides --t-fm")
    common.add_argument("--r-min", dest="r_min", type=_positive_float, help="first radius in bohr")
    common.add_argument("--r-max", dest="r_max", type=_positive_float, help="last radius in bohr")
    common.add_argument("--points", type=_positive_int, help="number of radii (>= 2)")
    common.add_argument("--grid", choices=("linear", "log"))
    common.add_argument("--method", help="evaluation route")
    common.add_argument("--tol", type=_positive_float, help="relative tolerance (also VACPOL_TOL)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--jobs", type=_positive_int, help="worker processes for the grid")
    common.add_argument("--config", help="key=value settings file")
    common.add_argument("--out", help="write the table here instead of stdout")

    for name, text in (("point", f"point-nucleus Uehling potential; methods {', '.join(POINT_METHODS)}"),
                       ("fermi", "Fermi-nucleus Uehling potential; methods direct, sommerfeld"),
                       ("ks", "Fermi-nucleus Kallen-Sabry potential; method ks_table"),
                       ("table", "table for any method above")):
        sub.add_parser(name, parents=[common], help=text, description=text)

    ver = sub.add_parser("verify", help="run the verification suite",
                         description="Run property and oracle checks; exit 1 if any fails.")
    ver.add_argument("suite", nargs="?", default="all", choices=SUITES)
    ver.add_argument("--tol-scale", dest="tol_scale", type=_positive_float, default=1.0,
                     help="multiply every check threshold")
    ver.add_argument("--out", help="write the report here instead of stdout")
    return parser


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None, environ=None):
    """Execute a command line without writing output.

    Returns ``(exit_code, output_text, out_path)``; `out_path` is None for
    stdout.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_USAGE), "", None
    out = args.out
    try:
        if args.command == "verify":
            report = cmd_verify(args.suite, args.tol_scale)
            return report.exit_code, report.render(), out
        cfg = build_config(args, args.command, environ)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", RegimeWarning)
            table = _table_for(args.command, cfg)
        notes = sorted({str(w.message) for w in caught})
        for msg in notes:
            print(f"vacpol: note: {msg}", file=sys.stderr)
        return EXIT_OK, table.render(cfg.format), out
    except (UsageError, DomainError) as exc:
        print(f"vacpol: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, "", None


def main_to_string(argv, environ=None):
    """Output text of a successful command line (for in-process use)."""
    code, text, _ = run(argv, environ)
    if code == EXIT_USAGE:
        raise UsageError(f"bad command line: {argv!r}")
    return text


def main(argv=None):
    code, text, out = run(argv)
    if text:
        try:
            _emit(text, out)
        except OSError as exc:
            print(f"vacpol: error: cannot write {out}: {exc.strerror}", file=sys.stderr)
            return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())

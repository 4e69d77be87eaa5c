"""Command-line front end.

Every subcommand reads the same network config, a small TOML file::

    topology = "ladder"
    [component_a]
    kind = "raw"
    terms = "1"
    [component_b]
    kind = "spring_damper"
    c = 1
    k = 1

Exit codes: 0 success, 2 usage or config error, 3 derivation error,
4 numeric or branch failure.
"""

from __future__ import annotations

import argparse
import csv
import re
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, TextIO

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import frequency, timedomain
from .errors import (
    BranchFailure,
    Degenerate,
    ImplicitNetError,
    InsufficientSamples,
    InvalidArity,
    InvalidParameter,
    ParseError,
    ZeroOperator,
)
from .networks import ComponentModel, NetworkSpec, QuadraticImplicitOp, derive
from .operators import fp_parse, render, render_compact
from .solver import equivalent_order, passive_root, try_explicit

EXIT_OK, EXIT_USAGE, EXIT_DERIVE, EXIT_NUMERIC = 0, 2, 3, 4

_KIND_ALIASES = {"rlc": "rlc_series", "rlc_series": "rlc_series", "pipe": "pipe", "rod": "rod",
                 "spring_damper": "spring_damper", "raw": "raw"}
_KIND_KEYS = {"rlc_series": ("L", "R", "C"), "pipe": ("a", "b"), "rod": ("a", "b"),
              "spring_damper": ("c", "k"), "raw": ("terms",)}


class ConfigError(Exception):
    pass


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _line_of(text: str, key: str, section: str | None = None) -> int | None:
    current = None
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        head = re.match(r"\[\s*([^\]]+?)\s*\]", stripped)
        if head:
            current = head.group(1)
            continue
        if current == section and re.match(rf"{re.escape(key)}\s*=", stripped):
            return lineno
    return None


def _where(text: str, key: str, section: str | None) -> str:
    field = f"{section}.{key}" if section else key
    line = _line_of(text, key, section)
    return f"line {line}, field '{field}'" if line else f"field '{field}'"


def _number(table: dict, key: str, text: str, section: str | None) -> float:
    if key not in table:
        raise ConfigError(f"{_where(text, key, section)}: missing")
    value = table[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{_where(text, key, section)}: expected a number, got {value!r}")
    return float(value)


def _component(doc: dict, section: str, text: str) -> ComponentModel:
    table = doc.get(section)
    if not isinstance(table, dict):
        raise ConfigError(f"missing section [{section}]")
    kind_raw = table.get("kind")
    if kind_raw not in _KIND_ALIASES:
        raise ConfigError(f"{_where(text, 'kind', section)}: unknown kind {kind_raw!r}")
    kind = _KIND_ALIASES[kind_raw]
    allowed = {"kind", *_KIND_KEYS[kind]}
    for key in table:
        if key not in allowed:
            raise ConfigError(f"{_where(text, key, section)}: not a parameter of {kind_raw}")
    if kind == "raw":
        terms = table.get("terms")
        if not isinstance(terms, str):
            raise ConfigError(f"{_where(text, 'terms', section)}: expected a quoted operator string")
        try:
            op = fp_parse(terms)
        except ParseError as exc:
            raise ConfigError(f"{_where(text, 'terms', section)}: {exc}") from exc
        return ComponentModel.from_operator(op)
    params = {key: _number(table, key, text, section) for key in _KIND_KEYS[kind]}
    return ComponentModel(kind, params)


def load_config(path: str | Path) -> NetworkSpec:
    """Parse a network config file.

    Raises
    ------
    ConfigError
        Unreadable file, TOML syntax error or a malformed field.
    InvalidParameter, InvalidArity, ZeroOperator
        Well-formed fields that describe an invalid network.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    topology = doc.get("topology")
    if topology not in ("tree", "multitree", "ladder"):
        raise ConfigError(f"{_where(text, 'topology', None)}: expected tree, multitree or ladder, got {topology!r}")
    extra = set(doc) - {"topology", "m", "n", "convention", "component_a", "component_b"}
    if extra:
        key = sorted(extra)[0]
        raise ConfigError(f"{_where(text, key, None)}: unknown key")
    kw = {}
    if topology == "multitree":
        for key in ("m", "n"):
            value = doc.get(key)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{_where(text, key, None)}: expected an integer, got {value!r}")
            kw[key] = value
        convention = doc.get("convention", "recursion")
        if convention not in ("recursion", "paper"):
            raise ConfigError(f"{_where(text, 'convention', None)}: expected recursion or paper, got {convention!r}")
        kw["convention"] = convention
    return NetworkSpec(topology, _component(doc, "component_a", text), _component(doc, "component_b", text), **kw)


def _g(x: float) -> str:
    return format(float(x) + 0.0, ".17g")


def format_equation(eq: QuadraticImplicitOp) -> str:
    parts = ["L^2" if eq.a2 == 1.0 else f"{_g(eq.a2)}*L^2"]
    if eq.b:
        parts.append(f"({render_compact(eq.b)})*L")
    if eq.c:
        parts.append(f"({render_compact(eq.c)})")
    return " + ".join(parts) + " = 0"


@contextmanager
def _output(path: str | None) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _spec_and_equation(args) -> tuple[NetworkSpec, QuadraticImplicitOp]:
    try:
        spec = load_config(args.config)
    except ConfigError as exc:
        raise _Fail(EXIT_USAGE, str(exc)) from exc
    except (InvalidParameter, InvalidArity, ZeroOperator) as exc:
        raise _Fail(EXIT_DERIVE, f"invalid network: {exc}") from exc
    if getattr(args, "convention", None) and spec.topology == "multitree":
        spec = NetworkSpec(spec.topology, spec.component_a, spec.component_b, spec.m, spec.n, args.convention)
    try:
        return spec, derive(spec)
    except ImplicitNetError as exc:
        raise _Fail(EXIT_DERIVE, f"derivation failed: {exc}") from exc


def cmd_derive(args) -> int:
    spec, eq = _spec_and_equation(args)
    print(f"topology {spec.topology}")
    print(f"a2 = {_g(eq.a2)}")
    print(f"B = {render(eq.b)}")
    print(f"C = {render(eq.c)}")
    print(format_equation(eq))
    try:
        print(f"order {equivalent_order(eq):g}")
    except Degenerate as exc:
        raise _Fail(EXIT_DERIVE, str(exc)) from exc
    if args.explicit:
        result = try_explicit(eq)
        print(result.kind)
        if result.roots:
            print("roots " + " ; ".join(render(r) for r in result.roots))
            root = passive_root(result)
            print(f"positive root {render(root)}" if root is not None else "positive root none")
    return EXIT_OK


def _check_window(args) -> None:
    if not (0 < args.wmin < args.wmax) or args.points < 2:
        raise _Fail(EXIT_USAGE, "need 0 < wmin < wmax and points >= 2")


def cmd_bode(args) -> int:
    _check_window(args)
    spec, eq = _spec_and_equation(args)
    fr = frequency.bode(eq, args.wmin, args.wmax, args.points, topology=spec.topology)
    with _output(args.out) as fh:
        frequency.write_bode_csv(fr, fh)
    if not fr.branch_ok.all() and not args.allow_branch_fail:
        bad = int((~fr.branch_ok).sum())
        raise _Fail(EXIT_NUMERIC, f"{bad} sample(s) without a passive root")
    return EXIT_OK


def _read_bode_csv(path: str) -> frequency.FrequencyResponse:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        omega = np.array([float(r["omega"]) for r in rows])
        value = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
        ok = np.array([r["branch_ok"] == "1" for r in rows], dtype=bool)
        return frequency.FrequencyResponse(omega, value, ok)
    except (OSError, KeyError, ValueError) as exc:
        raise _Fail(EXIT_USAGE, f"cannot read bode CSV {path}: {exc}") from exc


def cmd_order(args) -> int:
    if args.from_csv:
        fr = _read_bode_csv(args.from_csv)
        wlo, whi = (args.wmin, args.wmax) if args.window_given else (fr.omega[0], fr.omega[-1])
    else:
        if args.config is None:
            raise _Fail(EXIT_USAGE, "need a config file or --from-csv")
        _check_window(args)
        spec, eq = _spec_and_equation(args)
        fr = frequency.bode(eq, args.wmin, args.wmax, args.points, topology=spec.topology)
        wlo, whi = args.wmin, args.wmax
    try:
        slope = frequency.fit_order(fr, wlo, whi)
    except InsufficientSamples as exc:
        raise _Fail(EXIT_USAGE, str(exc)) from exc
    except BranchFailure as exc:
        raise _Fail(EXIT_NUMERIC, str(exc)) from exc
    print(f"{slope:.6f}")
    return EXIT_OK


def cmd_step(args) -> int:
    if not args.tmax > 0 or args.points < 2:
        raise _Fail(EXIT_USAGE, "need tmax > 0 and points >= 2")
    _, eq = _spec_and_equation(args)
    root = passive_root(try_explicit(eq))
    try:
        if root is not None:
            h = args.tmax / (args.points - 1)
            forcing = timedomain.TimeSeries(h, np.ones(args.points))
            ts = timedomain.simulate_explicit(root, forcing)
            print(f"path gl root {render(root)}", file=sys.stderr)
        else:
            ts = timedomain.step_response_implicit(eq, args.tmax, args.points, nodes=args.nodes)
            print("path ilt", file=sys.stderr)
    except ImplicitNetError as exc:
        raise _Fail(EXIT_NUMERIC, f"simulation failed: {exc}") from exc
    with _output(args.out) as fh:
        timedomain.write_series_csv(ts, fh)
    return EXIT_OK


def _termination(text: str) -> complex | object:
    if text.strip().lower() == "open":
        return frequency.OPEN
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"termination must be 'open' or a complex number, got {text!r}")


def _digits(text: str) -> int | str | None:
    if text == "auto":
        return text
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or a digit count, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("digit count must be >= 0")
    return value or None


def cmd_converge(args) -> int:
    if not args.omega > 0 or args.max_depth < 0:
        raise _Fail(EXIT_USAGE, "need omega > 0 and max-depth >= 0")
    spec, eq = _spec_and_equation(args)
    try:
        errs = frequency.truncation_errors(
            spec, complex(0.0, args.omega), args.max_depth, args.termination, dps=args.dps
        )
    except ImplicitNetError as exc:
        raise _Fail(EXIT_NUMERIC, str(exc)) from exc
    rows = list(enumerate(errs))
    with _output(args.out) as fh:
        fh.write("depth,abs_err\n")
        for depth, err in rows:
            fh.write(f"{depth},{_g(err)}\n")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="implicitnet", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("derive", help="print the quadratic operator equation")
    p.add_argument("config")
    p.add_argument("--convention", choices=("recursion", "paper"), help="override for multitree")
    p.add_argument("--explicit", action="store_true", help="also try to solve in closed form")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("bode", help="frequency sweep of the passive root, as CSV")
    p.add_argument("config")
    p.add_argument("--wmin", type=float, default=1e-2)
    p.add_argument("--wmax", type=float, default=1e2)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--convention", choices=("recursion", "paper"))
    p.add_argument("--allow-branch-fail", action="store_true")
    p.set_defaults(func=cmd_bode)

    p = sub.add_parser("order", help="log-log slope of |L(i omega)| over a window")
    p.add_argument("config", nargs="?")
    p.add_argument("--wmin", type=float)
    p.add_argument("--wmax", type=float)
    p.add_argument("--points", type=int, default=41)
    p.add_argument("--from-csv", help="fit a CSV written by 'bode' instead of a config")
    p.add_argument("--convention", choices=("recursion", "paper"))
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("step", help="unit-step flow response, as CSV")
    p.add_argument("config")
    p.add_argument("--tmax", type=float, default=5.0)
    p.add_argument("--points", type=int, default=501)
    p.add_argument("--nodes", type=int, default=timedomain.DEFAULT_NODES)
    p.add_argument("--out")
    p.add_argument("--convention", choices=("recursion", "paper"))
    p.set_defaults(func=cmd_step)

    p = sub.add_parser("converge", help="error of the truncated network against the implicit root")
    p.add_argument("config")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--max-depth", type=int, default=60)
    p.add_argument("--termination", type=_termination, default=0j)
    p.add_argument(
        "--dps", type=_digits, default="auto", help="working digits: auto (default), N, or 0 for plain doubles"
    )
    p.add_argument("--out")
    p.add_argument("--convention", choices=("recursion", "paper"))
    p.set_defaults(func=cmd_converge)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return int(exc.code or 0)
    if args.command == "order":
        args.window_given = args.wmin is not None or args.wmax is not None
        if args.wmin is None:
            args.wmin = 1e4
        if args.wmax is None:
            args.wmax = 1e6
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"implicitnet: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

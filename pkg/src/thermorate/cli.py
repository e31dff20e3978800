"""Command-line front end: CSV rows of closed forms, oracle checks and asymptotics.

    thermorate rate nonresonant --z 5 --nu 0.5
    thermorate compare cutoff --z-grid 0.1:10:8:log --d 2 --nu 0.3
    thermorate asym screened --z-grid 10:80:4:log --t 0.5

Exit codes: 0 ok, 2 bad arguments, 3 domain error, 4 validity condition
violated, 5 unreliable result with no asymptotic fallback.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DivergenceError,
    NonConvergenceError,
    QuadratureBudgetError,
    ThermorateError,
)
from .quadrature import quad_rate
from .queries import FAMILIES, RateQuery
from .rates import ASYMPTOTIC_FAMILIES, asym, closed

HEADER = "family,params,closed,oracle,rel_dev,asym,method_flag"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_DIVERGENCE = 4
EXIT_UNRELIABLE = 5

ORACLE_TOL = 1e-10

# family -> (query field, command-line dest) in constructor order
_FIELDS: dict[str, tuple[tuple[str, str], ...]] = {
    "nonresonant": (("z", "z"), ("nu", "nu")),
    "cutoff": (("z", "z"), ("d", "d"), ("nu", "nu")),
    "screened": (("z", "z"), ("t", "t"), ("nu", "nu")),
    "depleted": (("z", "z"), ("delta", "delta"), ("b", "b"), ("nu", "nu")),
    "resonant": (("q", "q"), ("a", "a"), ("b", "bres"), ("g", "g"), ("nu", "nu"),
                 ("n", "n"), ("m", "m")),
    "general": (("z", "z"), ("p", "p"), ("rho", "rho"), ("n", "n"), ("m", "m")),
    "general-h": (("z", "z"), ("p", "p"), ("rho", "rho"), ("gamma", "gamma")),
}
_DEFAULTS = {"nu": 0.0, "a": 1.0, "p": 1.0, "rho": 0.0, "n": 1, "m": 2}
_INTS = {"n", "m"}


class UsageError(Exception):
    pass


class Unreliable(Exception):
    pass


@dataclass(frozen=True)
class TableRow:
    family: str
    params: str
    closed: float | None
    oracle: float | None
    rel_dev: float | None
    asym: float | None
    method_flag: str

    def csv(self) -> str:
        cells = [self.family, self.params]
        cells += [_fmt(v) for v in (self.closed, self.oracle, self.rel_dev, self.asym)]
        cells.append(self.method_flag)
        return ",".join(cells)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, int):
        return str(v)
    return format(float(v), ".17g")


def rel_dev(value: float, reference: float) -> float:
    return abs(value - reference) / max(abs(reference), 1e-300)


def parse_grid(text: str) -> list[float]:
    """start:stop:count with an optional :log suffix."""
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
        raise UsageError(f"bad grid {text!r}; expected start:stop:count[:log]")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise UsageError(f"bad grid {text!r}; expected start:stop:count[:log]") from None
    if count < 1:
        raise UsageError("grid count must be >= 1")
    if len(parts) == 4:
        if not (start > 0 and stop > 0):
            raise UsageError("log grid needs positive endpoints")
        pts = np.geomspace(start, stop, count)
    else:
        pts = np.linspace(start, stop, count)
    return [float(v) for v in pts]


def _axis(family: str) -> str:
    return "q" if family == "resonant" else "z"


def build_queries(family: str, opts: argparse.Namespace, grid: bool) -> list[RateQuery]:
    cls = FAMILIES[family]
    axis = _axis(family)
    values = {}
    for name, dest in _FIELDS[family]:
        if name == axis:
            continue
        v = getattr(opts, dest, None)
        if v is None:
            v = _DEFAULTS.get(dest)
        if v is None:
            raise UsageError(f"{family} needs --{dest}")
        values[name] = int(v) if dest in _INTS else v
    if grid:
        if opts.z_grid is None:
            raise UsageError("--z-grid is required")
        points = parse_grid(opts.z_grid)
    else:
        x = opts.q if axis == "q" and opts.q is not None else opts.z
        if x is None:
            raise UsageError(f"{family} needs --{axis}")
        points = [x]
    order = [name for name, _ in _FIELDS[family]]
    return [cls(**{k: ({**values, axis: x})[k] for k in order}) for x in points]


def _params(query: RateQuery) -> str:
    # shortest round-trip form so inputs echo as typed
    return ";".join(f"{k}={v if isinstance(v, int) else repr(float(v))}"
                    for k, v in query.params().items())


def _closed_or_switch(query: RateQuery) -> tuple[float, str, float | None]:
    """Closed-form value, its flag, and the asymptotic value when defined."""
    a = asym(query).value if query.family in ASYMPTOTIC_FAMILIES and _axis_value(query) > 0 else None
    try:
        sv = closed(query)
        ok = sv.reliable
    except NonConvergenceError:
        sv, ok = None, False
    if ok:
        flag = "double_pole_series" if sv.method == "double_pole_series" else "series"
        return sv.value, flag, a
    if a is None:
        raise Unreliable(f"{query.family}: closed form unreliable at {_params(query)}")
    return a, "asymptotic_switchover", a


def _axis_value(query: RateQuery) -> float:
    return getattr(query, _axis(query.family))


def _oracle(query: RateQuery) -> float:
    try:
        return quad_rate(query, ORACLE_TOL).value
    except QuadratureBudgetError as exc:
        return exc.result.value


def make_row(command: str, query: RateQuery) -> TableRow:
    params = _params(query)
    if command in ("rate", "table"):
        value, flag, a = _closed_or_switch(query)
        return TableRow(query.family, params, value, None, None, a, flag)
    if command == "compare":
        value, flag, _ = _closed_or_switch(query)
        ref = _oracle(query)
        return TableRow(query.family, params, value, ref, rel_dev(value, ref), None, flag)
    # asym: compare the asymptotic line against the best available reference
    a = asym(query).value
    try:
        sv = closed(query)
    except NonConvergenceError:
        sv = None
    if sv is not None and sv.reliable:
        flag = "double_pole_series" if sv.method == "double_pole_series" else "series"
        return TableRow(query.family, params, sv.value, None, rel_dev(a, sv.value), a, flag)
    ref = _oracle(query)
    return TableRow(query.family, params, None, ref, rel_dev(a, ref), a, "asymptotic_switchover")


def _row_job(args):
    command, query = args
    try:
        return make_row(command, query), None
    except Unreliable as exc:
        return None, (EXIT_UNRELIABLE, str(exc))
    except DivergenceError as exc:
        return None, (EXIT_DIVERGENCE, str(exc))
    except ThermorateError as exc:
        return None, (EXIT_DOMAIN, str(exc))


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="thermorate",
        description="Closed-form thermonuclear reaction-rate integrals as CSV rows.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("rate", "one closed-form value"),
        ("table", "closed-form values over a z grid"),
        ("compare", "closed form against adaptive quadrature"),
        ("asym", "large-z asymptotic line against the series (or quadrature)"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("family", choices=sorted(FAMILIES))
        p.add_argument("--z", type=float)
        p.add_argument("--z-grid", dest="z_grid", metavar="START:STOP:COUNT[:log]")
        for flag in ("nu", "d", "t", "b", "delta", "q", "a", "bres", "g", "p", "rho", "gamma"):
            p.add_argument(f"--{flag}", type=float)
        p.add_argument("--n", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--jobs", type=int, default=1, help="worker processes for grid rows")
    return ap


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        opts = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        grid = opts.command != "rate"
        if opts.command == "rate" and opts.z_grid is not None:
            raise UsageError("rate takes a single --z; use table for grids")
        if opts.command == "asym" and opts.family not in ASYMPTOTIC_FAMILIES:
            print(f"error: no asymptotic form for family {opts.family!r}", file=err)
            return EXIT_DOMAIN
        if opts.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        queries = build_queries(opts.family, opts, grid)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except TypeError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except DivergenceError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DIVERGENCE
    except ThermorateError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DOMAIN

    jobs = [(opts.command, q) for q in queries]
    if opts.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=opts.jobs) as pool:
            results = list(pool.map(_row_job, jobs))
    else:
        results = [_row_job(j) for j in jobs]

    lines = [HEADER]
    for row, failure in results:
        if failure is not None:
            code, msg = failure
            print(f"error: {msg}", file=err)
            return code
        lines.append(row.csv())
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

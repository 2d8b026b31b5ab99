"""Command line front end.

Subcommands: alpha, subaction, sweep, rotation, plot. Options resolve in
three layers, command line over config file over built-in defaults. The
config file is TOML with one table per subcommand. Exit codes: 0 success,
2 bad input or configuration, 3 an iteration failed to converge, 4 the
requested rotation vector is unattainable.

With --manifest PATH each run also records what it did: tool version,
resolved options and their hash, input digest, timestamps, and every file
written. Stdout itself avoids timestamps, and on rational inputs every
number prints as p/q, so runs are byte-reproducible.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from numbers import Rational
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib

from . import __version__
from .config import BudgetExceeded
from .debruijn import build_debruijn, karp_alpha
from .doubling import doubling_solve
from .figures import (
    potential_rows,
    residual_rows,
    subaction_rows,
    write_csv,
    write_svg,
)
from .potentials import GridPotential, LocallyConstantPotential
from .potfile import PotentialFormatError, load_potential
from .rotation import (
    InfeasibleRotationError,
    RotationSpec,
    beta_function,
    periodic_oracle,
)
from .subaction import (
    contact_locus,
    exact_subaction,
    half_iteration,
    maximizing_orbits,
    residual,
)
from .sweep import beta_sweep
from .transfer import ConvergenceError
from .words import format_word

DEFAULTS: dict[str, dict[str, object]] = {
    "alpha": {"tol": 1e-12, "max_iters": 100_000, "max_period": 12},
    "subaction": {"method": "exact", "tol": 1e-12, "max_iters": 100_000},
    "sweep": {"betas": "1,2,4,8,16,32,64", "depth": 3, "jobs": 1},
    "rotation": {"period_cap": 6, "band": "0"},
    "plot": {"what": "potential"},
}


class ConvergenceFailure(RuntimeError):
    pass


class UsageError(ValueError):
    pass


@dataclass
class Run:
    command: str
    options: dict
    input_path: str
    outputs: list[str] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)

    def say(self, text: str) -> None:
        self.lines.append(text)

    def wrote(self, path: str) -> None:
        self.outputs.append(str(path))


def _fmt(v) -> str:
    if isinstance(v, Rational):
        f = Fraction(v)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return repr(float(v))


def _parse_rational(s: str) -> Fraction:
    from decimal import Decimal, InvalidOperation

    s = s.strip()
    try:
        if "/" in s:
            return Fraction(s)
        return Fraction(Decimal(s))
    except (ValueError, InvalidOperation, ZeroDivisionError):
        raise UsageError(f"bad rational literal {s!r}") from None


def _parse_betas(s: str) -> list[float]:
    try:
        out = [float(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad beta list {s!r}") from None
    if not out:
        raise UsageError("empty beta list")
    return out


def _need_symbolic(pot, command: str) -> LocallyConstantPotential:
    if not isinstance(pot, LocallyConstantPotential):
        raise UsageError(f"'{command}' needs a symbolic potential, not a sampled map")
    return pot


def _cmd_alpha(run: Run, pot) -> None:
    o = run.options
    if isinstance(pot, GridPotential):
        res = doubling_solve(
            pot,
            tol=float(o["tol"]),
            max_iters=int(o["max_iters"]),
            max_period=int(o["max_period"]),
        )
        if not res.subaction.converged:
            raise ConvergenceFailure(
                f"iteration stalled at oscillation {res.subaction.oscillation:.3e}"
            )
        run.say(f"alpha = {_fmt(res.alpha)}")
        run.say(f"iterations = {res.subaction.iterations}")
        for orb in res.orbits:
            run.say(
                f"orbit {format_word(orb.word)} (period {orb.period}, "
                f"max residual {orb.max_residual:.3e})"
            )
        if not res.orbits:
            run.say("orbit none detected at this tolerance")
        return
    G = build_debruijn(pot)
    alpha = karp_alpha(G)
    orbits = maximizing_orbits(G, alpha)
    run.say(f"alpha = {_fmt(alpha)}")
    for w in orbits.cycles:
        run.say(f"cycle {format_word(w)}")
    if orbits.truncated:
        run.say("cycle list truncated")


def _cmd_subaction(run: Run, pot) -> None:
    o = run.options
    if isinstance(pot, GridPotential):
        u = half_iteration(pot, tol=float(o["tol"]), max_iters=int(o["max_iters"]))
        if not u.converged:
            raise ConvergenceFailure(
                f"iteration stalled at oscillation {u.oscillation:.3e}"
            )
        R = residual(u, pot)
        run.say(f"alpha = {_fmt(u.alpha)}")
        run.say(f"iterations = {u.iterations}")
        run.say(f"min residual = {_fmt(R.min())}")
    else:
        method = str(o["method"])
        if method == "exact":
            if not pot.exact:
                raise UsageError("method 'exact' needs rational coefficients")
            G = build_debruijn(pot)
            u = exact_subaction(G)
        elif method == "half":
            u = half_iteration(pot, tol=float(o["tol"]), max_iters=int(o["max_iters"]))
            if not u.converged:
                raise ConvergenceFailure(
                    f"iteration stalled at oscillation {u.oscillation:.3e}"
                )
        else:
            raise UsageError(f"unknown method {method!r}")
        R = residual(u, pot)
        run.say(f"alpha = {_fmt(u.alpha)}")
        for w, v in zip(u.nodes, u.values):
            run.say(f"u {format_word(w) if w else '-'} = {_fmt(v)}")
        locus = contact_locus(R)
        run.say(
            "contact words: "
            + (" ".join(format_word(w) for w in locus.words) or "none")
        )
    if o.get("csv"):
        write_csv(subaction_rows(u), o["csv"])
        run.wrote(o["csv"])
    if o.get("svg"):
        write_svg(
            [( [float(x) for _, x, _ in subaction_rows(u)],
               [float(v) for _, _, v in subaction_rows(u)], "u" )],
            o["svg"],
            title="subaction",
            step=True,
        )
        run.wrote(o["svg"])


def _cmd_sweep(run: Run, pot) -> None:
    o = run.options
    pot = _need_symbolic(pot, "sweep")
    betas = _parse_betas(str(o["betas"]))
    res = beta_sweep(pot, betas, depth=int(o["depth"]), jobs=int(o["jobs"]))
    run.say("beta pressure energy entropy gap")
    for b, r, gap in zip(res.schedule, res.results, res.pressure_gaps):
        run.say(
            f"{_fmt(b)} {r.pressure!r} {r.energy!r} {r.entropy!r} {gap!r}"
        )
    run.say(f"alpha = {_fmt(res.alpha)}")
    run.say(f"verdict = {res.verdict}")
    if res.limit_vector is not None:
        for w, m in zip(res.cylinder_words, res.limit_vector):
            run.say(f"limit {format_word(w)} = {m!r}")
    if o.get("csv"):
        lines = ["beta,pressure,energy,entropy,gap"]
        for b, r, gap in zip(res.schedule, res.results, res.pressure_gaps):
            lines.append(f"{b!r},{r.pressure!r},{r.energy!r},{r.entropy!r},{gap!r}")
        Path(o["csv"]).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
        run.wrote(o["csv"])


def _cmd_rotation(run: Run, pot) -> None:
    o = run.options
    pot = _need_symbolic(pot, "rotation")
    obs_paths = o.get("observable") or []
    if not obs_paths:
        raise UsageError("rotation needs at least one --observable")
    coords = []
    for p in obs_paths:
        c = load_potential(p)
        coords.append(_need_symbolic(c, "rotation observable"))
    phi = RotationSpec(tuple(coords))
    target_s = o.get("target")
    if not target_s:
        raise UsageError("rotation needs --target")
    target = tuple(_parse_rational(t) for t in str(target_s).split(","))
    band = _parse_rational(str(o["band"]))
    res = beta_function(pot, phi, target, band=band)
    run.say(f"beta = {_fmt(res.value)}")
    run.say("target = " + ",".join(_fmt(t) for t in target))
    orc = periodic_oracle(pot, phi, target, int(o["period_cap"]))
    if orc.found:
        gap = res.value - orc.best_mean
        run.say(
            f"oracle best = {_fmt(orc.best_mean)} "
            f"(cycle {format_word(orc.best_word)}, gap {_fmt(gap)})"
        )
    else:
        run.say(f"oracle best = none up to period {orc.max_period}")
    flag = {True: "yes", False: "no", None: "undecided"}[orc.on_boundary]
    run.say(f"on boundary: {flag}")


def _cmd_plot(run: Run, pot) -> None:
    o = run.options
    out = o.get("out")
    if not out:
        raise UsageError("plot needs --out FILE.svg")
    what = str(o["what"])
    if what == "potential":
        rows = potential_rows(pot)
    elif what in ("subaction", "residual"):
        if isinstance(pot, GridPotential):
            u = half_iteration(pot)
            if not u.converged:
                raise ConvergenceFailure("iteration stalled")
            rows = subaction_rows(u) if what == "subaction" else residual_rows(residual(u, pot))
        else:
            if not pot.exact:
                raise UsageError(f"'{what}' plot needs rational coefficients")
            G = build_debruijn(pot)
            u = exact_subaction(G)
            rows = subaction_rows(u) if what == "subaction" else residual_rows(residual(u, pot))
    else:
        raise UsageError(f"unknown plot kind {what!r}")
    rows = sorted(rows, key=lambda r: float(r[1]))
    write_svg(
        [([float(x) for _, x, _ in rows], [float(v) for _, _, v in rows], what)],
        out,
        title=what,
        step=True,
    )
    run.wrote(out)


COMMANDS = {
    "alpha": _cmd_alpha,
    "subaction": _cmd_subaction,
    "sweep": _cmd_sweep,
    "rotation": _cmd_rotation,
    "plot": _cmd_plot,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ergopt",
        description="maximizing measures, subactions, and rotation sets on the full shift",
    )
    parser.add_argument("--version", action="version", version=f"ergopt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("potfile", help="potential JSON file")
        p.add_argument("--config", help="TOML config file")
        p.add_argument("--manifest", help="write a run manifest to this path")
        p.add_argument("--budget", type=int, help="enumeration budget override")

    p = sub.add_parser("alpha", help="maximizing value and maximizing orbits")
    common(p)
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.add_argument("--max-period", dest="max_period", type=int)

    p = sub.add_parser("subaction", help="solve for a calibrated subaction")
    common(p)
    p.add_argument("--method", choices=["exact", "half"])
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.add_argument("--csv")
    p.add_argument("--svg")

    p = sub.add_parser("sweep", help="equilibrium states along a beta schedule")
    common(p)
    p.add_argument("--betas")
    p.add_argument("--depth", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--csv")

    p = sub.add_parser("rotation", help="constrained maximization at a rotation vector")
    common(p)
    p.add_argument("--observable", action="append")
    p.add_argument("--target")
    p.add_argument("--period-cap", dest="period_cap", type=int)
    p.add_argument("--band")

    p = sub.add_parser("plot", help="render a potential, subaction, or residual")
    common(p)
    p.add_argument("--what", choices=["potential", "subaction", "residual"])
    p.add_argument("--out")

    return parser


def resolve_options(args: argparse.Namespace) -> dict:
    config: dict = {}
    if args.config:
        try:
            with open(args.config, "rb") as fh:
                config = tomllib.load(fh)
        except FileNotFoundError:
            raise UsageError(f"config file {args.config!r} not found") from None
        except tomllib.TOMLDecodeError as e:
            raise UsageError(f"bad config file: {e}") from None
    section = config.get(args.command, {})
    if not isinstance(section, dict):
        raise UsageError(f"config section [{args.command}] must be a table")
    resolved = dict(DEFAULTS.get(args.command, {}))
    for k, v in section.items():
        key = k.replace("-", "_")
        if key not in resolved and key not in (
            "csv", "svg", "out", "observable", "target",
        ):
            raise UsageError(f"unknown config key {k!r} in [{args.command}]")
        resolved[key] = v
    for key, val in vars(args).items():
        if key in ("command", "config", "manifest", "potfile", "budget"):
            continue
        if val is not None:
            resolved[key] = val
    return resolved


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(path: str, run: Run, started: str, finished: str) -> None:
    options = {
        k: (str(v) if isinstance(v, Fraction) else v) for k, v in run.options.items()
    }
    canon = json.dumps(options, sort_keys=True, separators=(",", ":"), default=str)
    doc = {
        "tool": "ergopt",
        "version": __version__,
        "command": run.command,
        "input": {"path": run.input_path, "sha256": _sha256(run.input_path)},
        "options": options,
        "config_hash": hashlib.sha256(canon.encode()).hexdigest(),
        "started": started,
        "finished": finished,
        "outputs": sorted(run.outputs),
    }
    Path(path).write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n"
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = datetime.now(timezone.utc).isoformat()
    try:
        if args.budget is not None:
            if args.budget < 1:
                raise UsageError("budget must be positive")
            os.environ["ERGOPT_BUDGET"] = str(args.budget)
        options = resolve_options(args)
        run = Run(command=args.command, options=options, input_path=args.potfile)
        try:
            pot = load_potential(args.potfile)
        except FileNotFoundError:
            raise UsageError(f"potential file {args.potfile!r} not found") from None
        COMMANDS[args.command](run, pot)
    except (UsageError, PotentialFormatError, BudgetExceeded) as e:
        print(f"ergopt: error: {e}", file=sys.stderr)
        return 2
    except (ConvergenceFailure, ConvergenceError) as e:
        print(f"ergopt: did not converge: {e}", file=sys.stderr)
        return 3
    except InfeasibleRotationError as e:
        print(f"ergopt: infeasible: {e}", file=sys.stderr)
        return 4
    for line in run.lines:
        print(line)
    if args.manifest:
        finished = datetime.now(timezone.utc).isoformat()
        _write_manifest(args.manifest, run, started, finished)
    return 0

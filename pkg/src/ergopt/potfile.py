"""Reading and writing potentials as JSON documents.

Two shapes. A locally constant potential:

    {"alphabet": 2, "depth": 2, "terms": [{"word": "01", "coef": "1"}]}

with coefficients given as JSON integers (exact), floats, or strings parsed
as exact rationals ("1/2", "0.25", "-3"). Words shorter than the depth are
allowed and mean their cylinder, as in the constructor. And a sampled circle
potential for the doubling map:

    {"map": "doubling", "n": 1024, "values": [0.0, ...]}
    {"map": "doubling", "builtin": "sin2", "n": 16384}

Parse failures raise PotentialFormatError tagged with the JSON path of the
offending element.
"""
from __future__ import annotations

import json
from fractions import Fraction
from numbers import Rational
from pathlib import Path

from .potentials import BUILTIN_GRID_FUNCTIONS, GridPotential, LocallyConstantPotential
from .words import format_word, parse_word

Potential = LocallyConstantPotential | GridPotential


class PotentialFormatError(ValueError):
    """Malformed potential document; `location` holds the JSON path."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


def _fail(location: str, message: str) -> "PotentialFormatError":
    return PotentialFormatError(location, message)


def _require_int(obj, location: str, lo: int | None = None) -> int:
    if not isinstance(obj, int) or isinstance(obj, bool):
        raise _fail(location, f"expected an integer, got {type(obj).__name__}")
    if lo is not None and obj < lo:
        raise _fail(location, f"must be >= {lo}, got {obj}")
    return obj


def _parse_coef(obj, location: str):
    if isinstance(obj, bool):
        raise _fail(location, "expected a number or rational string")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, str):
        try:
            return Fraction(obj)
        except (ValueError, ZeroDivisionError) as e:
            raise _fail(location, f"bad rational literal {obj!r}: {e}") from None
    raise _fail(location, f"expected a number or rational string, got {type(obj).__name__}")


def _parse_locally_constant(doc: dict) -> LocallyConstantPotential:
    d = _require_int(doc.get("alphabet"), "alphabet", lo=2)
    depth = _require_int(doc.get("depth"), "depth", lo=1)
    raw_terms = doc.get("terms", [])
    if not isinstance(raw_terms, list):
        raise _fail("terms", f"expected a list, got {type(raw_terms).__name__}")
    terms: dict[tuple[int, ...], object] = {}
    for i, item in enumerate(raw_terms):
        loc = f"terms[{i}]"
        if not isinstance(item, dict):
            raise _fail(loc, f"expected an object, got {type(item).__name__}")
        unknown = set(item) - {"word", "coef"}
        if unknown:
            raise _fail(loc, f"unknown keys {sorted(unknown)}")
        if "word" not in item or "coef" not in item:
            raise _fail(loc, "needs both 'word' and 'coef'")
        ws = item["word"]
        if not isinstance(ws, str):
            raise _fail(f"{loc}.word", f"expected a string, got {type(ws).__name__}")
        try:
            word = parse_word(ws, d)
        except ValueError as e:
            raise _fail(f"{loc}.word", str(e)) from None
        if len(word) > depth:
            raise _fail(f"{loc}.word", f"longer than depth {depth}")
        coef = _parse_coef(item["coef"], f"{loc}.coef")
        if word in terms:
            raise _fail(f"{loc}.word", f"duplicate word {ws!r}")
        terms[word] = coef
    try:
        return LocallyConstantPotential(d=d, depth=depth, terms=terms)
    except ValueError as e:
        raise _fail("$", str(e)) from None


def _parse_grid(doc: dict) -> GridPotential:
    if doc.get("map") != "doubling":
        raise _fail("map", f"unknown map {doc.get('map')!r}")
    if "builtin" in doc:
        name = doc["builtin"]
        if not isinstance(name, str) or name not in BUILTIN_GRID_FUNCTIONS:
            raise _fail(
                "builtin",
                f"expected one of {sorted(BUILTIN_GRID_FUNCTIONS)}, got {name!r}",
            )
        n = _require_int(doc.get("n"), "n", lo=4)
        try:
            return GridPotential.builtin(name, n)
        except ValueError as e:
            raise _fail("n", str(e)) from None
    values = doc.get("values")
    if not isinstance(values, list):
        raise _fail("values", "sampled map needs a 'values' array or a 'builtin' name")
    out = []
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise _fail(f"values[{i}]", f"expected a number, got {type(v).__name__}")
        out.append(float(v))
    n = doc.get("n", len(values))
    n = _require_int(n, "n", lo=4)
    if n != len(values):
        raise _fail("n", f"declares {n} samples but 'values' has {len(values)}")
    try:
        return GridPotential(n=n, values=tuple(out))
    except ValueError as e:
        raise _fail("values", str(e)) from None


def loads_potential(text: str) -> Potential:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise _fail(f"line {e.lineno} col {e.colno}", e.msg) from None
    if not isinstance(doc, dict):
        raise _fail("$", f"expected an object, got {type(doc).__name__}")
    if "map" in doc:
        return _parse_grid(doc)
    return _parse_locally_constant(doc)


def load_potential(path: str | Path) -> Potential:
    return loads_potential(Path(path).read_text(encoding="utf-8"))


def _coef_json(c):
    if isinstance(c, Rational):
        f = Fraction(c)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return float(c)


def dumps_potential(pot: Potential) -> str:
    if isinstance(pot, GridPotential):
        doc = {"map": "doubling", "n": pot.n, "values": list(pot.values)}
    elif isinstance(pot, LocallyConstantPotential):
        doc = {
            "alphabet": pot.d,
            "depth": pot.depth,
            "terms": [
                {"word": format_word(w), "coef": _coef_json(c)}
                for w, c in sorted(pot.terms.items())
            ],
        }
    else:
        raise TypeError(f"cannot serialize {type(pot).__name__}")
    return json.dumps(doc, indent=2) + "\n"


def save_potential(pot: Potential, path: str | Path) -> None:
    Path(path).write_text(dumps_potential(pot), encoding="utf-8", newline="\n")

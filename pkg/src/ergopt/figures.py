"""Tables and plots for subactions, residuals, and potentials.

CSV output is three columns (word, x, value), rows sorted by x, decimal
points, LF line endings. Rational values print as p/q so the exact lane
stays exact on disk. Plots are single-file SVG with no external references.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from pathlib import Path

from .potentials import GridPotential, LocallyConstantPotential
from .subaction import ResidualField, SubactionField
from .words import format_word, word_interval

CSV_HEADER = "word,x,value"

Row = tuple[str, Fraction | float, object]


def _value_str(v) -> str:
    if isinstance(v, Rational):
        f = Fraction(v)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return repr(float(v))


def _rows_from_nodes(d: int, words, values) -> list[Row]:
    rows = []
    for w, v in zip(words, values):
        x = word_interval(w, d)[0] if w else Fraction(0)
        rows.append((format_word(w) if w else "", x, v))
    return rows


def potential_rows(A: LocallyConstantPotential | GridPotential) -> list[Row]:
    if isinstance(A, GridPotential):
        return [
            (str(i), Fraction(i, A.n), A.values[i]) for i in range(A.n)
        ]
    words = sorted(A.terms)
    return _rows_from_nodes(A.d, words, [A.terms[w] for w in words])


def subaction_rows(u: SubactionField) -> list[Row]:
    if u.nodes is None:
        n = u.grid_n
        return [(str(i), Fraction(i, n), u.values[i]) for i in range(n)]
    return _rows_from_nodes(u.d, u.nodes, u.values)


def residual_rows(R: ResidualField) -> list[Row]:
    if R.graph is None:
        n = R.grid_n
        return [(str(i), Fraction(i, n), R.values[i]) for i in range(n)]
    table = R.as_table()
    words = sorted(table)
    return _rows_from_nodes(R.graph.d, words, [table[w] for w in words])


def write_csv(rows: list[Row], path: str | Path) -> None:
    rows = sorted(rows, key=lambda r: (float(r[1]), r[0]))
    lines = [CSV_HEADER]
    for label, x, v in rows:
        lines.append(f"{label},{repr(float(x))},{_value_str(v)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


WIDTH, HEIGHT = 800, 500
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 40, 50
PALETTE = ("#1b6ca8", "#c0392b", "#2e8b57", "#8e44ad")


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _fmt(v: float) -> str:
    return f"{v:.3g}"


def render_svg(
    series,
    title: str = "",
    xlabel: str = "x",
    ylabel: str = "",
    step: bool = False,
) -> str:
    """series: list of (xs, ys, label); returns a standalone SVG document."""
    pts = [(float(x), float(y)) for xs, ys, _ in series for x, y in zip(xs, ys)]
    if not pts:
        raise ValueError("nothing to plot")
    xlo = min(p[0] for p in pts)
    xhi = max(p[0] for p in pts)
    ylo = min(p[1] for p in pts)
    yhi = max(p[1] for p in pts)
    if xhi == xlo:
        xhi = xlo + 1.0
    if yhi == ylo:
        yhi = ylo + 1.0
    pad = 0.05 * (yhi - ylo)
    ylo -= pad
    yhi += pad
    iw = WIDTH - MARGIN_L - MARGIN_R
    ih = HEIGHT - MARGIN_T - MARGIN_B

    def px(x: float) -> float:
        return MARGIN_L + (x - xlo) / (xhi - xlo) * iw

    def py(y: float) -> float:
        return MARGIN_T + (yhi - y) / (yhi - ylo) * ih

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'font-family="sans-serif" font-size="13">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{iw}" height="{ih}" '
        f'fill="none" stroke="#444" stroke-width="1"/>',
    ]
    if title:
        out.append(
            f'<text x="{WIDTH / 2:.1f}" y="{MARGIN_T - 14}" text-anchor="middle" '
            f'font-size="16">{title}</text>'
        )
    for tx in _ticks(xlo, xhi):
        x = px(tx)
        out.append(
            f'<line x1="{x:.2f}" y1="{MARGIN_T + ih}" x2="{x:.2f}" '
            f'y2="{MARGIN_T + ih + 5}" stroke="#444"/>'
        )
        out.append(
            f'<text x="{x:.2f}" y="{MARGIN_T + ih + 20}" '
            f'text-anchor="middle">{_fmt(tx)}</text>'
        )
    for ty in _ticks(ylo, yhi):
        y = py(ty)
        out.append(
            f'<line x1="{MARGIN_L - 5}" y1="{y:.2f}" x2="{MARGIN_L}" '
            f'y2="{y:.2f}" stroke="#444"/>'
        )
        out.append(
            f'<text x="{MARGIN_L - 8}" y="{y + 4:.2f}" '
            f'text-anchor="end">{_fmt(ty)}</text>'
        )
    out.append(
        f'<text x="{MARGIN_L + iw / 2:.1f}" y="{HEIGHT - 12}" '
        f'text-anchor="middle">{xlabel}</text>'
    )
    if ylabel:
        out.append(
            f'<text x="18" y="{MARGIN_T + ih / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 18 {MARGIN_T + ih / 2:.1f})">{ylabel}</text>'
        )
    for idx, (xs, ys, label) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        coords = []
        prev = None
        for x, y in zip(xs, ys):
            X, Y = px(float(x)), py(float(y))
            if step and prev is not None:
                coords.append(f"{X:.2f},{prev:.2f}")
            coords.append(f"{X:.2f},{Y:.2f}")
            prev = Y
        out.append(
            f'<polyline points="{" ".join(coords)}" fill="none" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        if label:
            y0 = MARGIN_T + 16 + 16 * idx
            out.append(
                f'<line x1="{MARGIN_L + 8}" y1="{y0 - 4}" x2="{MARGIN_L + 28}" '
                f'y2="{y0 - 4}" stroke="{color}" stroke-width="1.5"/>'
            )
            out.append(f'<text x="{MARGIN_L + 34}" y="{y0}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(
    series,
    path: str | Path,
    title: str = "",
    xlabel: str = "x",
    ylabel: str = "",
    step: bool = False,
) -> None:
    Path(path).write_text(
        render_svg(series, title=title, xlabel=xlabel, ylabel=ylabel, step=step),
        encoding="utf-8",
        newline="\n",
    )

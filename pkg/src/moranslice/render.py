"""Static SVG rendering of a level-n carpet approximation and the line L_a.

Output is byte-for-byte deterministic: cells are written in lexicographic
word order, coordinates with fixed precision.
"""
from __future__ import annotations

from fractions import Fraction

from .carpet import MoranSequence, cell_count, cell_rect, iter_words
from .errors import ElementCapExceeded
from .slicing import Slope, clip_line, format_rational, line_cell_intersects

DEFAULT_ELEMENT_CAP = 2 * 10**4
DEFAULT_CANVAS = 600


def _fmt(v: Fraction, size: int) -> str:
    s = f"{float(v * size):.4f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def render_svg(sigma: MoranSequence, depth: int, slope: Slope | None = None, a=None,
               canvas: int = DEFAULT_CANVAS, element_cap: int = DEFAULT_ELEMENT_CAP) -> tuple[str, dict]:
    """Return (svg text, summary) with one rect per level-``depth`` cell.

    Cells met by the line get class ``hit``.  The unit square maps to a
    ``canvas`` x ``canvas`` box with y pointing down.
    """
    n_cells = cell_count(sigma, depth)
    with_line = slope is not None and a is not None
    if n_cells + with_line > element_cap:
        raise ElementCapExceeded(f"{n_cells} cells at depth {depth} exceed the element cap {element_cap}")
    if with_line:
        a = Fraction(a)
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- moranslice render: sigma={sigma} depth={depth}"
        + (f" slope={slope} a={format_rational(a)}" if with_line else "")
        + f"; unit square -> [0,{canvas}]^2, y axis inverted (screen convention) -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{canvas}" height="{canvas}" '
        f'viewBox="0 0 {canvas} {canvas}">',
        "<style>svg{background:#fff}.cell{fill:#222}.hit{fill:#d33}.line{stroke:#07c;stroke-width:1.5}</style>",
    ]
    body = []
    hits = 0
    for word in iter_words(sigma, depth):
        r = cell_rect(word, sigma)
        hit = with_line and line_cell_intersects(r, slope, a)
        hits += hit
        body.append(
            f'<rect class="{"cell hit" if hit else "cell"}" x="{_fmt(r.x_lo, canvas)}" '
            f'y="{_fmt(1 - r.y_hi, canvas)}" width="{_fmt(r.side, canvas)}" height="{_fmt(r.side, canvas)}"/>'
        )
    lines = 0
    if with_line:
        seg = clip_line(slope, a)
        if seg is not None:
            (x0, y0), (x1, y1) = seg
            body.append(
                f'<line class="line" x1="{_fmt(x0, canvas)}" y1="{_fmt(1 - y0, canvas)}" '
                f'x2="{_fmt(x1, canvas)}" y2="{_fmt(1 - y1, canvas)}"/>'
            )
            lines = 1
    svg = "\n".join(head + body + ["</svg>", ""])
    return svg, {"rectangles": n_cells, "intersecting": hits, "lines": lines}

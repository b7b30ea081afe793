"""Text, JSON and SVG renderings of a rank <= 2 root system."""
from __future__ import annotations

import math

from .lieclass import CartanType, RootSystem, classify, display_coordinates
from .radix import RadicalNumber

__all__ = ["roots_json", "roots_svg", "roots_text"]


def _text(x) -> str:
    if isinstance(x, RadicalNumber):
        return str(x)
    return repr(float(x.real if hasattr(x, "real") else x))


def _rows(rs: RootSystem, ctype: CartanType):
    coords = display_coordinates(rs, ctype)
    rows = []
    for rv, xy in zip(rs.roots, coords):
        rows.append((rv, xy))
    # counter-clockwise from the +x axis
    rows.sort(key=lambda r: math.atan2(float(r[1][1]), float(r[1][0])) % (2 * math.pi))
    return rows


def roots_text(rs: RootSystem, ctype: CartanType | None = None, names=None) -> str:
    ctype = ctype or classify(rs)
    names = names or [f"H{i + 1}" for i in range(rs.rank)]
    lines = [
        f"type: {ctype.name}" + ("  (numeric)" if ctype.numeric else ""),
        f"rank: {rs.rank}",
        f"roots: {len(rs.roots)}",
        "cartan: " + "; ".join(f"{n} = {e}" for n, e in zip(names, rs.cartan.elements)),
    ]
    if "length_ratio" in ctype.details:
        lines.append(f"squared length ratio: {_text(ctype.details['length_ratio'])}")
    lines.append("weight (" + ", ".join(names) + ") | plane coordinates | root vector")
    for rv, xy in _rows(rs, ctype):
        w = ", ".join(_text(x) for x in rv.weight)
        vec = str(rv.polynomial) if rv.polynomial is not None else "-"
        lines.append(f"({w}) | ({_text(xy[0])}, {_text(xy[1])}) | {vec}")
    return "\n".join(lines) + "\n"


def roots_json(rs: RootSystem, ctype: CartanType | None = None, names=None) -> dict:
    ctype = ctype or classify(rs)
    names = names or [f"H{i + 1}" for i in range(rs.rank)]
    out = {
        "type": ctype.name,
        "numeric": ctype.numeric,
        "rank": rs.rank,
        "cartan_matrix": ctype.cartan_matrix,
        "cartan": [{"name": n, "element": e.to_json()} for n, e in zip(names, rs.cartan.elements)],
        "roots": [],
    }
    if "length_ratio" in ctype.details:
        out["squared_length_ratio"] = _text(ctype.details["length_ratio"])
    for rv, xy in _rows(rs, ctype):
        out["roots"].append({
            "weight": [_text(x) for x in rv.weight],
            "plane": [_text(xy[0]), _text(xy[1])],
            "vector": rv.polynomial.to_json() if rv.polynomial is not None else None,
        })
    return out


def roots_svg(rs: RootSystem, ctype: CartanType | None = None, names=None, size: int = 480) -> str:
    """Arrows from the origin at plane coordinates (short roots have length 1)."""
    ctype = ctype or classify(rs)
    names = names or [f"H{i + 1}" for i in range(rs.rank)]
    rows = _rows(rs, ctype)
    extent = max([1.0] + [math.hypot(float(x), float(y)) for _, (x, y) in rows])
    c = size / 2
    scale = (size / 2 - 70) / extent

    def pt(x, y):
        return c + scale * float(x), c - scale * float(y)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        "<defs><marker id=\"head\" markerWidth=\"10\" markerHeight=\"7\" refX=\"9\" refY=\"3.5\" orient=\"auto\">"
        "<polygon points=\"0 0, 10 3.5, 0 7\"/></marker></defs>",
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<line x1="20" y1="{c}" x2="{size - 20}" y2="{c}" stroke="#bbb"/>',
        f'<line x1="{c}" y1="20" x2="{c}" y2="{size - 20}" stroke="#bbb"/>',
        f'<text x="{size - 20}" y="{c - 6}" font-size="11" text-anchor="end" fill="#666">'
        f"weights: ({', '.join(names)})</text>",
        f'<text x="10" y="18" font-size="14">{ctype.name}: {len(rows)} roots</text>',
    ]
    for rv, (x, y) in rows:
        x2, y2 = pt(x, y)
        parts.append(
            f'<line x1="{c}" y1="{c}" x2="{x2:.2f}" y2="{y2:.2f}" stroke="black" '
            f'stroke-width="1.5" marker-end="url(#head)"/>'
        )
        label = "(" + ", ".join(_text(w) for w in rv.weight) + ")"
        ux, uy = float(x), float(y)
        n = math.hypot(ux, uy) or 1.0
        lx, ly = x2 + 18 * ux / n, y2 - 18 * uy / n
        parts.append(f'<text x="{lx:.2f}" y="{ly:.2f}" font-size="11" text-anchor="middle">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

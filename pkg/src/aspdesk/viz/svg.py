"""SVG 1.1 serialisation, byte-identical for equal scenes.

One document node per scene element (a <g> when a shape carries text),
painted in (z, id) order.  Numbers are formatted through a single helper so
no float repr drift can sneak in.
"""

from __future__ import annotations

from xml.sax.saxutils import escape, quoteattr

from .scene import Scene, SceneElement, TEXT_FILL

FONT_SIZE = 12
EDGE_WIDTH = 1.5


def _fmt(value) -> str:
    number = round(float(value), 2)
    if number == int(number):
        return str(int(number))
    return f"{number:.2f}".rstrip("0")


def _text(x, y, content: str, *, color: str = TEXT_FILL, anchor: str = "middle") -> str:
    return (f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{FONT_SIZE}" '
            f'text-anchor="{anchor}" fill={quoteattr(color)}>'
            f"{escape(content)}</text>")


def _element_svg(element: SceneElement) -> str:
    g = element.geometry
    ident = f"data-id={quoteattr(element.id)}"
    fill = quoteattr(element.color)
    kind = element.kind

    if kind == "rect":
        shape = (f'<rect x="{_fmt(g["x"])}" y="{_fmt(g["y"])}" '
                 f'width="{_fmt(g["width"])}" height="{_fmt(g["height"])}" '
                 f'fill={fill} stroke="#455a64"/>')
        if element.text is None:
            return shape.replace("<rect ", f"<rect {ident} ", 1)
        caption = _text(g["x"] + g["width"] / 2, g["y"] + g["height"] / 2 + 4,
                        element.text)
        return f"<g {ident}>{shape}{caption}</g>"

    if kind == "ellipse":
        shape = (f'<ellipse cx="{_fmt(g["x"] + g["width"] / 2)}" '
                 f'cy="{_fmt(g["y"] + g["height"] / 2)}" '
                 f'rx="{_fmt(g["width"] / 2)}" ry="{_fmt(g["height"] / 2)}" '
                 f'fill={fill} stroke="#455a64"/>')
        if element.text is None:
            return shape.replace("<ellipse ", f"<ellipse {ident} ", 1)
        caption = _text(g["x"] + g["width"] / 2, g["y"] + g["height"] / 2 + 4,
                        element.text)
        return f"<g {ident}>{shape}{caption}</g>"

    if kind == "line":
        shape = (f'<line x1="{_fmt(g["x1"])}" y1="{_fmt(g["y1"])}" '
                 f'x2="{_fmt(g["x2"])}" y2="{_fmt(g["y2"])}" '
                 f'stroke={fill} stroke-width="{_fmt(EDGE_WIDTH)}"/>')
        if element.text is None:
            return shape.replace("<line ", f"<line {ident} ", 1)
        caption = _text((g["x1"] + g["x2"]) / 2, (g["y1"] + g["y2"]) / 2 - 3,
                        element.text, color=element.color)
        return f"<g {ident}>{shape}{caption}</g>"

    if kind == "polygon":
        points = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in g["points"])
        return (f'<polygon {ident} points="{points}" fill={fill} '
                f'stroke="#455a64"/>')

    if kind == "label":
        return (f'<text {ident} x="{_fmt(g["x"])}" y="{_fmt(g["y"])}" '
                f'font-size="{FONT_SIZE}" fill={fill}>'
                f"{escape(element.text or '')}</text>")

    if kind == "image":
        return (f'<image {ident} x="{_fmt(g["x"])}" y="{_fmt(g["y"])}" '
                f'width="{_fmt(g["width"])}" height="{_fmt(g["height"])}" '
                f'href={quoteattr(g["path"])}/>')

    if kind == "grid":
        lines = []
        x, y = g["x"], g["y"]
        total_w = g["cols"] * g["cell_width"]
        total_h = g["rows"] * g["cell_height"]
        for row in range(g["rows"] + 1):
            yy = y + row * g["cell_height"]
            lines.append(f'<line x1="{_fmt(x)}" y1="{_fmt(yy)}" '
                         f'x2="{_fmt(x + total_w)}" y2="{_fmt(yy)}" '
                         f'stroke={fill}/>')
        for col in range(g["cols"] + 1):
            xx = x + col * g["cell_width"]
            lines.append(f'<line x1="{_fmt(xx)}" y1="{_fmt(y)}" '
                         f'x2="{_fmt(xx)}" y2="{_fmt(y + total_h)}" '
                         f'stroke={fill}/>')
        return f"<g {ident}>{''.join(lines)}</g>"

    if kind == "graph-node":
        r = g["radius"]
        shape = (f'<ellipse cx="{_fmt(g["x"])}" cy="{_fmt(g["y"])}" '
                 f'rx="{_fmt(r)}" ry="{_fmt(r)}" fill={fill} '
                 f'stroke="#455a64"/>')
        if element.text is None:
            return shape.replace("<ellipse ", f"<ellipse {ident} ", 1)
        return f"<g {ident}>{shape}{_text(g['x'], g['y'] + 4, element.text)}</g>"

    if kind == "graph-edge":
        if "x1" in g:
            shape = (f'<line x1="{_fmt(g["x1"])}" y1="{_fmt(g["y1"])}" '
                     f'x2="{_fmt(g["x2"])}" y2="{_fmt(g["y2"])}" '
                     f'stroke={fill} stroke-width="{_fmt(EDGE_WIDTH)}"/>')
            if element.text is None:
                return shape.replace("<line ", f"<line {ident} ", 1)
            caption = _text((g["x1"] + g["x2"]) / 2,
                            (g["y1"] + g["y2"]) / 2 - 3, element.text)
            return f"<g {ident}>{shape}{caption}</g>"
        # hub: a pill box centred on (x, y)
        w, h = g["width"], g["height"]
        box = (f'<rect x="{_fmt(g["x"] - w / 2)}" y="{_fmt(g["y"] - h / 2)}" '
               f'width="{_fmt(w)}" height="{_fmt(h)}" rx="4" fill={fill} '
               f'stroke="#455a64"/>')
        return f"<g {ident}>{box}{_text(g['x'], g['y'] + 4, element.text or '')}</g>"

    raise ValueError(f"unknown scene element kind {kind!r}")


def export_svg(scene: Scene) -> str:
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(scene.width)}" height="{_fmt(scene.height)}" '
        f'viewBox="0 0 {_fmt(scene.width)} {_fmt(scene.height)}">',
    ]
    for element in sorted(scene.elements, key=lambda e: (e.z, e.id)):
        parts.append(_element_svg(element))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

/* Scene to SVG markup, matching the service's exporter byte for byte.
 *
 * The service is the reference renderer: same element order, same number
 * formatting, same attribute quoting.  Keeping the output identical means
 * "what the editor shows" and "what the server would export" can be
 * compared as plain strings, which the tests do. */

import { fmt, sortElements } from "./geometry.js";
import { Scene, SceneElement } from "./types.js";

const FONT_SIZE = 12;
const EDGE_WIDTH = 1.5;
const TEXT_FILL = "#212121";
const SHAPE_STROKE = "#455a64";

function esc(content: string): string {
    return content
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;");
}

// attribute quoting with the same quote-flip rule the service uses
function quoteattr(content: string): string {
    let data = esc(content)
        .replace(/\n/g, "&#10;")
        .replace(/\r/g, "&#13;")
        .replace(/\t/g, "&#9;");
    if (data.includes('"')) {
        if (data.includes("'")) {
            return '"' + data.replace(/"/g, "&quot;") + '"';
        }
        return "'" + data + "'";
    }
    return '"' + data + '"';
}

function textNode(x: number, y: number, content: string,
                  color = TEXT_FILL, anchor = "middle"): string {
    return `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${FONT_SIZE}" `
        + `text-anchor="${anchor}" fill=${quoteattr(color)}>`
        + `${esc(content)}</text>`;
}

function g(element: SceneElement, key: string): number {
    return element.geometry[key] as number;
}

function elementSvg(element: SceneElement): string {
    const ident = `data-id=${quoteattr(element.id)}`;
    const fill = quoteattr(element.style.color);
    const geo = element.geometry;

    if (element.kind === "rect") {
        const body = `x="${fmt(g(element, "x"))}" y="${fmt(g(element, "y"))}" `
            + `width="${fmt(g(element, "width"))}" `
            + `height="${fmt(g(element, "height"))}" `
            + `fill=${fill} stroke="${SHAPE_STROKE}"/>`;
        if (element.text === null) {
            return `<rect ${ident} ${body}`;
        }
        const caption = textNode(
            g(element, "x") + g(element, "width") / 2,
            g(element, "y") + g(element, "height") / 2 + 4, element.text);
        return `<g ${ident}><rect ${body}${caption}</g>`;
    }

    if (element.kind === "ellipse") {
        const body = `cx="${fmt(g(element, "x") + g(element, "width") / 2)}" `
            + `cy="${fmt(g(element, "y") + g(element, "height") / 2)}" `
            + `rx="${fmt(g(element, "width") / 2)}" `
            + `ry="${fmt(g(element, "height") / 2)}" `
            + `fill=${fill} stroke="${SHAPE_STROKE}"/>`;
        if (element.text === null) {
            return `<ellipse ${ident} ${body}`;
        }
        const caption = textNode(
            g(element, "x") + g(element, "width") / 2,
            g(element, "y") + g(element, "height") / 2 + 4, element.text);
        return `<g ${ident}><ellipse ${body}${caption}</g>`;
    }

    if (element.kind === "line") {
        const body = `x1="${fmt(g(element, "x1"))}" y1="${fmt(g(element, "y1"))}" `
            + `x2="${fmt(g(element, "x2"))}" y2="${fmt(g(element, "y2"))}" `
            + `stroke=${fill} stroke-width="${fmt(EDGE_WIDTH)}"/>`;
        if (element.text === null) {
            return `<line ${ident} ${body}`;
        }
        // connector captions take the line's own colour
        const caption = textNode(
            (g(element, "x1") + g(element, "x2")) / 2,
            (g(element, "y1") + g(element, "y2")) / 2 - 3,
            element.text, element.style.color);
        return `<g ${ident}><line ${body}${caption}</g>`;
    }

    if (element.kind === "polygon") {
        const pts = (geo["points"] as number[][])
            .map(([px, py]) => `${fmt(px)},${fmt(py)}`).join(" ");
        return `<polygon ${ident} points="${pts}" fill=${fill} `
            + `stroke="${SHAPE_STROKE}"/>`;
    }

    if (element.kind === "label") {
        return `<text ${ident} x="${fmt(g(element, "x"))}" `
            + `y="${fmt(g(element, "y"))}" font-size="${FONT_SIZE}" `
            + `fill=${fill}>${esc(element.text ?? "")}</text>`;
    }

    if (element.kind === "image") {
        return `<image ${ident} x="${fmt(g(element, "x"))}" `
            + `y="${fmt(g(element, "y"))}" width="${fmt(g(element, "width"))}" `
            + `height="${fmt(g(element, "height"))}" `
            + `href=${quoteattr(geo["path"] as string)}/>`;
    }

    if (element.kind === "grid") {
        const lines: string[] = [];
        const x = g(element, "x");
        const y = g(element, "y");
        const rows = g(element, "rows");
        const cols = g(element, "cols");
        const totalW = cols * g(element, "cell_width");
        const totalH = rows * g(element, "cell_height");
        for (let row = 0; row <= rows; row++) {
            const yy = y + row * g(element, "cell_height");
            lines.push(`<line x1="${fmt(x)}" y1="${fmt(yy)}" `
                + `x2="${fmt(x + totalW)}" y2="${fmt(yy)}" stroke=${fill}/>`);
        }
        for (let col = 0; col <= cols; col++) {
            const xx = x + col * g(element, "cell_width");
            lines.push(`<line x1="${fmt(xx)}" y1="${fmt(y)}" `
                + `x2="${fmt(xx)}" y2="${fmt(y + totalH)}" stroke=${fill}/>`);
        }
        return `<g ${ident}>${lines.join("")}</g>`;
    }

    if (element.kind === "graph-node") {
        const r = g(element, "radius");
        const body = `cx="${fmt(g(element, "x"))}" cy="${fmt(g(element, "y"))}" `
            + `rx="${fmt(r)}" ry="${fmt(r)}" fill=${fill} `
            + `stroke="${SHAPE_STROKE}"/>`;
        if (element.text === null) {
            return `<ellipse ${ident} ${body}`;
        }
        const caption = textNode(g(element, "x"), g(element, "y") + 4,
                                 element.text);
        return `<g ${ident}><ellipse ${body}${caption}</g>`;
    }

    // graph-edge: a connector line, or a labelled pill hub
    if ("x1" in geo) {
        const body = `x1="${fmt(g(element, "x1"))}" y1="${fmt(g(element, "y1"))}" `
            + `x2="${fmt(g(element, "x2"))}" y2="${fmt(g(element, "y2"))}" `
            + `stroke=${fill} stroke-width="${fmt(EDGE_WIDTH)}"/>`;
        if (element.text === null) {
            return `<line ${ident} ${body}`;
        }
        const caption = textNode(
            (g(element, "x1") + g(element, "x2")) / 2,
            (g(element, "y1") + g(element, "y2")) / 2 - 3, element.text);
        return `<g ${ident}><line ${body}${caption}</g>`;
    }
    const w = g(element, "width");
    const h = g(element, "height");
    const box = `<rect x="${fmt(g(element, "x") - w / 2)}" `
        + `y="${fmt(g(element, "y") - h / 2)}" width="${fmt(w)}" `
        + `height="${fmt(h)}" rx="4" fill=${fill} stroke="${SHAPE_STROKE}"/>`;
    const caption = textNode(g(element, "x"), g(element, "y") + 4,
                             element.text ?? "");
    return `<g ${ident}>${box}${caption}</g>`;
}

export function renderScene(scene: Scene): string {
    const parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        `<svg xmlns="http://www.w3.org/2000/svg" version="1.1" `
            + `width="${fmt(scene.canvas.width)}" `
            + `height="${fmt(scene.canvas.height)}" `
            + `viewBox="0 0 ${fmt(scene.canvas.width)} ${fmt(scene.canvas.height)}">`,
    ];
    for (const element of sortElements(scene.elements)) {
        parts.push(elementSvg(element));
    }
    parts.push("</svg>");
    return parts.join("\n") + "\n";
}

/* Markup for direct DOM injection: the same bytes minus the XML banner. */
export function renderForDom(scene: Scene): string {
    const full = renderScene(scene);
    return full.slice(full.indexOf("\n") + 1);
}

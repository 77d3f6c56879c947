/* Geometry arithmetic kept bit-compatible with the service's scene builder
 * and SVG exporter, so a locally edited scene serialises to the same bytes
 * the server would produce for the same edits. */

import { Scene, SceneElement } from "./types.js";

export const MARGIN = 20;
export const MIN_WIDTH = 120;
export const MIN_HEIGHT = 80;

export function num(element: SceneElement, key: string): number {
    const value = element.geometry[key];
    if (typeof value !== "number") {
        throw new Error(`element ${element.id} has no numeric ${key}`);
    }
    return value;
}

export function points(element: SceneElement): number[][] {
    const value = element.geometry["points"];
    if (!Array.isArray(value)) {
        throw new Error(`element ${element.id} has no vertex list`);
    }
    return value;
}

const F64 = new DataView(new ArrayBuffer(8));

/* Round half to even at two decimals, the way the service rounds canvases.
 * Scaling by 100 in floats first would misround values like 2.675 (whose
 * product lands just above 267.5), so the quotient and remainder are taken
 * exactly from the double's mantissa and exponent. */
export function round2(value: number): number {
    if (!Number.isFinite(value) || value === 0) {
        return value === 0 ? 0 : value;
    }
    const negative = value < 0;
    F64.setFloat64(0, Math.abs(value));
    const bits = F64.getBigUint64(0);
    const biasedExp = Number((bits >> 52n) & 0x7ffn);
    const fraction = bits & 0xfffffffffffffn;
    const mantissa = biasedExp === 0 ? fraction : fraction | (1n << 52n);
    const exp = (biasedExp === 0 ? 1 : biasedExp) - 1075;

    let hundredths: bigint;
    if (exp >= 0) {
        hundredths = (mantissa * 100n) << BigInt(exp);
    } else {
        const numerator = mantissa * 100n;
        const denominator = 1n << BigInt(-exp);
        let q = numerator / denominator;
        const twiceRest = (numerator % denominator) * 2n;
        if (twiceRest > denominator
                || (twiceRest === denominator && (q & 1n) === 1n)) {
            q += 1n;
        }
        hundredths = q;
    }
    const result = Number(hundredths) / 100;
    return negative ? -result : result;
}

// number formatting of the SVG exporter: integers bare, else two decimals
// with trailing zeros dropped
export function fmt(value: number): string {
    const n = round2(value);
    if (Number.isInteger(n)) {
        return String(n + 0); // normalises -0
    }
    const fixed = n.toFixed(2);
    return fixed.endsWith("0") ? fixed.slice(0, -1) : fixed;
}

// label widths count code points, not UTF-16 units
function textLength(text: string | null): number {
    return text === null ? 0 : [...text].length;
}

export function extent(element: SceneElement): [number, number, number, number] {
    const g = element.geometry;
    switch (element.kind) {
        case "rect":
        case "ellipse":
        case "image": {
            const x = num(element, "x");
            const y = num(element, "y");
            return [x, y, x + num(element, "width"), y + num(element, "height")];
        }
        case "label": {
            const x = num(element, "x");
            const y = num(element, "y");
            const width = 7 * textLength(element.text) + 4;
            return [x, y - 12, x + width, y + 4];
        }
        case "line": {
            const x1 = num(element, "x1");
            const y1 = num(element, "y1");
            const x2 = num(element, "x2");
            const y2 = num(element, "y2");
            return [Math.min(x1, x2), Math.min(y1, y2),
                    Math.max(x1, x2), Math.max(y1, y2)];
        }
        case "graph-edge": {
            if ("x1" in g) {
                const x1 = num(element, "x1");
                const y1 = num(element, "y1");
                const x2 = num(element, "x2");
                const y2 = num(element, "y2");
                return [Math.min(x1, x2), Math.min(y1, y2),
                        Math.max(x1, x2), Math.max(y1, y2)];
            }
            // hub: a pill box centred on (x, y)
            const x = num(element, "x");
            const y = num(element, "y");
            const half = num(element, "width") / 2;
            return [x - half, y - 10, x + half, y + 10];
        }
        case "polygon": {
            const vertices = points(element);
            const xs = vertices.map((p) => p[0]);
            const ys = vertices.map((p) => p[1]);
            return [Math.min(...xs), Math.min(...ys),
                    Math.max(...xs), Math.max(...ys)];
        }
        case "grid": {
            const x = num(element, "x");
            const y = num(element, "y");
            return [x, y,
                    x + num(element, "cols") * num(element, "cell_width"),
                    y + num(element, "rows") * num(element, "cell_height")];
        }
        case "graph-node": {
            const x = num(element, "x");
            const y = num(element, "y");
            const r = num(element, "radius");
            return [x - r, y - r, x + r, y + r];
        }
    }
}

export function canvasSize(elements: SceneElement[]): { width: number; height: number } {
    if (elements.length === 0) {
        return { width: MIN_WIDTH, height: MIN_HEIGHT };
    }
    let maxX = -Infinity;
    let maxY = -Infinity;
    for (const element of elements) {
        const box = extent(element);
        maxX = Math.max(maxX, box[2]);
        maxY = Math.max(maxY, box[3]);
    }
    return {
        width: round2(Math.max(maxX + MARGIN, MIN_WIDTH)),
        height: round2(Math.max(maxY + MARGIN, MIN_HEIGHT)),
    };
}

// painting order: z, then id by code points (ids are unique)
export function sortElements(elements: SceneElement[]): SceneElement[] {
    return [...elements].sort((a, b) => {
        if (a.style.z !== b.style.z) {
            return a.style.z - b.style.z;
        }
        return a.id < b.id ? -1 : a.id > b.id ? 1 : 0;
    });
}

export function refreshScene(elements: SceneElement[]): Scene {
    const sorted = sortElements(elements);
    return { canvas: canvasSize(sorted), elements: sorted };
}

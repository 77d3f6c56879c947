import { describe, expect, it } from "vitest";

import { renderForDom, renderScene } from "../src/render.js";
import { Scene } from "../src/types.js";
import { QUEENS_4, boardScene, el, scene } from "./helpers.js";

/* Expected markup below is frozen from the service exporter for the same
 * scenes; the client renderer must reproduce it byte for byte. */

const HEADER = '<?xml version="1.0" encoding="UTF-8"?>';

describe("renderScene", () => {
    it("renders the empty scene as a bare canvas", () => {
        expect(renderScene(scene())).toBe([
            HEADER,
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                + 'width="120" height="80" viewBox="0 0 120 80">',
            "</svg>",
        ].join("\n") + "\n");
    });

    it("renders one rect per shape atom", () => {
        const svg = renderScene(
            scene(el("box", "rect", { x: 10, y: 10, width: 40, height: 24 })));
        expect(svg).toBe([
            HEADER,
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                + 'width="120" height="80" viewBox="0 0 120 80">',
            '<rect data-id="box" x="10" y="10" width="40" height="24" '
                + 'fill="#cfd8dc" stroke="#455a64"/>',
            "</svg>",
        ].join("\n") + "\n");
        expect(svg.match(/<rect/g)).toHaveLength(1);
    });

    it("wraps captioned shapes and escapes text", () => {
        const svg = renderScene(scene(
            el("box", "rect", { x: 10, y: 10, width: 40, height: 24 },
               { text: "hello" }),
            el("edge", "line", { x1: 60, y1: 6, x2: 90, y2: 24 },
               { color: "#d62728", z: 1, text: "e1" }),
            el("tag", "label", { x: 12, y: 70 },
               { color: "#212121", text: 'say "hi" & <cheer>' })));
        expect(svg).toBe([
            HEADER,
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                + 'width="162" height="94" viewBox="0 0 162 94">',
            '<g data-id="edge"><line x1="60" y1="6" x2="90" y2="24" '
                + 'stroke="#d62728" stroke-width="1.5"/>'
                + '<text x="75" y="12" font-size="12" text-anchor="middle" '
                + 'fill="#d62728">e1</text></g>',
            '<g data-id="box"><rect x="10" y="10" width="40" height="24" '
                + 'fill="#cfd8dc" stroke="#455a64"/>'
                + '<text x="30" y="26" font-size="12" text-anchor="middle" '
                + 'fill="#212121">hello</text></g>',
            '<text data-id="tag" x="12" y="70" font-size="12" '
                + 'fill="#212121">say "hi" &amp; &lt;cheer&gt;</text>',
            "</svg>",
        ].join("\n") + "\n");
    });

    it("draws grids as row lines then column lines", () => {
        const svg = renderScene(scene(el("g", "grid", {
            x: 5, y: 5, rows: 2, cols: 3, cell_width: 20, cell_height: 10,
        }, { color: "#90a4ae", z: 0 })));
        expect(svg).toBe([
            HEADER,
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                + 'width="120" height="80" viewBox="0 0 120 80">',
            '<g data-id="g">'
                + '<line x1="5" y1="5" x2="65" y2="5" stroke="#90a4ae"/>'
                + '<line x1="5" y1="15" x2="65" y2="15" stroke="#90a4ae"/>'
                + '<line x1="5" y1="25" x2="65" y2="25" stroke="#90a4ae"/>'
                + '<line x1="5" y1="5" x2="5" y2="25" stroke="#90a4ae"/>'
                + '<line x1="25" y1="5" x2="25" y2="25" stroke="#90a4ae"/>'
                + '<line x1="45" y1="5" x2="45" y2="25" stroke="#90a4ae"/>'
                + '<line x1="65" y1="5" x2="65" y2="25" stroke="#90a4ae"/>'
                + "</g>",
            "</svg>",
        ].join("\n") + "\n");
    });

    it("renders nodes, hubs, connectors, images and polygons", () => {
        const fixed: Scene = {
            canvas: { width: 129.5, height: 90 },
            elements: [
                el("n:1", "graph-node", { x: 40.5, y: 30.25, radius: 16 },
                   { color: "#eceff1", z: 1, text: "1" }),
                el("h:e(1,2)", "graph-edge",
                   { x: 90, y: 55.5, width: 19, height: 20 },
                   { color: "#1f77b4", z: 2, text: "e" }),
                el("c:e(1,2):1", "graph-edge",
                   { x1: 90, y1: 55.5, x2: 40.5, y2: 30.25 },
                   { color: "#1f77b4", z: 0, text: "1" }),
                el("img", "image",
                   { x: 4, y: 4, width: 32, height: 32, path: "pics/q.png" }),
                el("tri", "polygon", { points: [[0, 0], [40, 0], [20, 24]] }),
            ],
        };
        expect(renderScene(fixed)).toBe([
            HEADER,
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                + 'width="129.5" height="90" viewBox="0 0 129.5 90">',
            '<g data-id="c:e(1,2):1"><line x1="90" y1="55.5" x2="40.5" '
                + 'y2="30.25" stroke="#1f77b4" stroke-width="1.5"/>'
                + '<text x="65.25" y="39.88" font-size="12" '
                + 'text-anchor="middle" fill="#212121">1</text></g>',
            '<g data-id="n:1"><ellipse cx="40.5" cy="30.25" rx="16" ry="16" '
                + 'fill="#eceff1" stroke="#455a64"/>'
                + '<text x="40.5" y="34.25" font-size="12" '
                + 'text-anchor="middle" fill="#212121">1</text></g>',
            '<g data-id="h:e(1,2)"><rect x="80.5" y="45.5" width="19" '
                + 'height="20" rx="4" fill="#1f77b4" stroke="#455a64"/>'
                + '<text x="90" y="59.5" font-size="12" text-anchor="middle" '
                + 'fill="#212121">e</text></g>',
            '<image data-id="img" x="4" y="4" width="32" height="32" '
                + 'href="pics/q.png"/>',
            '<polygon data-id="tri" points="0,0 40,0 20,24" fill="#cfd8dc" '
                + 'stroke="#455a64"/>',
            "</svg>",
        ].join("\n") + "\n");
    });

    it("flips attribute quoting when the id contains double quotes", () => {
        const svg = renderScene(
            scene(el('p("x")', "rect", { x: 0, y: 0, width: 8, height: 8 })));
        expect(svg).toContain(
            "<rect data-id='p(\"x\")' x=\"0\" y=\"0\" width=\"8\" height=\"8\" "
                + 'fill="#cfd8dc" stroke="#455a64"/>');
    });

    it("shows a full board as cells plus one glyph per piece", () => {
        const queens: Array<[number, number]> = [
            [1, 1], [2, 5], [3, 8], [4, 6], [5, 3], [6, 7], [7, 2], [8, 4]];
        const svg = renderScene(boardScene(queens, 8));
        const rects = svg.match(/<rect data-id="cell/g) ?? [];
        const glyphs = svg.match(/<ellipse data-id="piece/g) ?? [];
        expect(rects).toHaveLength(64);
        expect(glyphs).toHaveLength(8);
        expect(svg.match(/<g data-id="board">/g)).toHaveLength(1);
    });
});

describe("renderForDom", () => {
    it("is the same markup without the XML banner", () => {
        const s = boardScene(QUEENS_4);
        expect(HEADER + "\n" + renderForDom(s)).toBe(renderScene(s));
        expect(renderForDom(s).startsWith("<svg ")).toBe(true);
    });
});

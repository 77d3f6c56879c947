import { describe, expect, it } from "vitest";

import {
    EditError,
    applyEdit,
    applyEditList,
    createGesture,
    deleteGesture,
    moveGesture,
    relabelGesture,
    restyleGesture,
} from "../src/edits.js";
import { canonicalScene, findElement } from "../src/scene.js";
import { QUEENS_4, boardScene, el, scene } from "./helpers.js";

describe("moveGesture", () => {
    it("turns a drag of a free shape into one rounded move payload", () => {
        const s = scene(el("box", "rect", { x: 10, y: 10, width: 40, height: 24 }));
        expect(moveGesture(s, "box", 12.4, 13.6))
            .toEqual({ action: "move", target: "box", x: 12, y: 14 });
    });

    it("maps a drop inside a grid to the cell under the pointer", () => {
        const s = boardScene(QUEENS_4);
        // centre of row 2, col 3: x = 20 + 2*24 + 12, y = 20 + 24 + 12
        expect(moveGesture(s, "piece(2)", 80, 56))
            .toEqual({ action: "move", target: "piece(2)", row: 2, col: 3 });
    });

    it("stays inert outside the grid or off the slot", () => {
        const s = boardScene(QUEENS_4);
        expect(moveGesture(s, "piece(2)", 500, 56)).toBeNull();
        expect(moveGesture(s, "piece(2)", 80, 5)).toBeNull();
        // an element parked off its cell has a server-side position the
        // fill rewrite would not touch, so no gesture is offered
        const parked = boardScene(QUEENS_4);
        findElement(parked, "piece(2)")!.geometry["x"] = 99;
        expect(moveGesture(parked, "piece(2)", 80, 56)).toBeNull();
    });

    it("offers nothing for kinds without an origin", () => {
        const s = scene(el("w", "line", { x1: 0, y1: 0, x2: 9, y2: 9 }, { z: 1 }));
        expect(moveGesture(s, "w", 4, 4)).toBeNull();
        expect(moveGesture(s, "ghost", 4, 4)).toBeNull();
    });
});

describe("applyEdit move", () => {
    it("rewrites the cell and keeps the piece on its new slot", () => {
        const before = boardScene(QUEENS_4);
        const after = applyEdit(before,
            { action: "move", target: "piece(2)", row: 2, col: 3 });
        const piece = findElement(after, "piece(2)")!;
        expect(piece.parent).toEqual({ id: "board", row: 2, col: 3 });
        expect(piece.geometry["x"]).toBe(20 + 2 * 24);
        expect(piece.geometry["y"]).toBe(20 + 1 * 24);
        // the input scene is untouched
        expect(findElement(before, "piece(2)")!.parent!.col).toBe(4);
    });

    it("rejects cells outside the grid", () => {
        const s = boardScene(QUEENS_4);
        expect(() => applyEdit(s,
            { action: "move", target: "piece(2)", row: 0, col: 3 }))
            .toThrow(EditError);
        expect(() => applyEdit(s,
            { action: "move", target: "piece(2)", row: 2, col: 5 }))
            .toThrow(EditError);
    });

    it("refuses a free move of a grid-placed element", () => {
        const s = boardScene(QUEENS_4);
        expect(() => applyEdit(s,
            { action: "move", target: "piece(2)", x: 80, y: 56 }))
            .toThrow(EditError);
    });

    it("moves a free shape and regrows the canvas", () => {
        const s = scene(el("box", "rect", { x: 10, y: 10, width: 40, height: 24 }));
        const moved = applyEdit(s, { action: "move", target: "box", x: 200, y: 10 });
        expect(findElement(moved, "box")!.geometry["x"]).toBe(200);
        expect(moved.canvas).toEqual({ width: 260, height: 80 });
    });

    it("carries on-slot children along when the grid itself moves", () => {
        const s = boardScene(QUEENS_4);
        findElement(s, "piece(3)")!.geometry["x"] = 99; // parked off its slot
        const moved = applyEdit(s, { action: "move", target: "board", x: 30, y: 40 });
        expect(findElement(moved, "cell(1,1)")!.geometry)
            .toMatchObject({ x: 30, y: 40 });
        expect(findElement(moved, "piece(2)")!.geometry)
            .toMatchObject({ x: 30 + 3 * 24, y: 40 + 24 });
        expect(findElement(moved, "piece(3)")!.geometry["x"]).toBe(99);
    });

    it("drags connected edges along with a graph node", () => {
        const s = scene(
            el("a", "graph-node", { x: 10, y: 10, radius: 8 }, { z: 1 }),
            el("b", "graph-node", { x: 90, y: 40, radius: 8 }, { z: 1 }),
            el("ab", "graph-edge",
               { x1: 10, y1: 10, x2: 90, y2: 40, from: "a", to: "b" },
               { z: 1 }));
        const moved = applyEdit(s, { action: "move", target: "a", x: 30, y: 20 });
        const edge = findElement(moved, "ab")!;
        expect(edge.geometry).toMatchObject({ x1: 30, y1: 20, x2: 90, y2: 40 });
    });
});

describe("delete", () => {
    it("emits one payload per deletable element, ids sorted", () => {
        const s = boardScene(QUEENS_4);
        expect(deleteGesture(s, ["piece(2)", "cell(1,1)"])).toEqual([
            { action: "delete", target: "cell(1,1)" },
            { action: "delete", target: "piece(2)" },
        ]);
    });

    it("keeps containers that still hold placed elements", () => {
        const s = boardScene(QUEENS_4);
        expect(deleteGesture(s, ["board"])).toEqual([]);
        expect(() => applyEdit(s, { action: "delete", target: "board" }))
            .toThrow(EditError);
    });

    it("cascades from a graph node to its edges, once", () => {
        const s = scene(
            el("a", "graph-node", { x: 10, y: 10, radius: 8 }, { z: 1 }),
            el("b", "graph-node", { x: 90, y: 40, radius: 8 }, { z: 1 }),
            el("ab", "graph-edge",
               { x1: 10, y1: 10, x2: 90, y2: 40, from: "a", to: "b" },
               { z: 1 }));
        // selecting the node and the edge yields a single payload
        expect(deleteGesture(s, ["ab", "a"]))
            .toEqual([{ action: "delete", target: "a" }]);
        const after = applyEdit(s, { action: "delete", target: "a" });
        expect(after.elements.map((e) => e.id)).toEqual(["b"]);
    });

    it("shrinks the canvas after the edit", () => {
        const s = scene(
            el("near", "rect", { x: 10, y: 10, width: 20, height: 20 }),
            el("far", "rect", { x: 300, y: 10, width: 20, height: 20 }));
        const after = applyEdit(s, { action: "delete", target: "far" });
        expect(after.canvas).toEqual({ width: 120, height: 80 });
    });
});

describe("create", () => {
    it("builds a schema-complete rect with the drawing defaults", () => {
        const s = scene();
        const payload = createGesture(s, "box", "rect",
                                      { x: 10.7, y: 20.2, width: 30, height: 12 });
        expect(payload).toEqual({
            action: "create", target: "box", kind: "rect",
            props: { x: 10.7, y: 20.2, width: 30, height: 12 },
        });
        const after = applyEdit(s, payload!);
        expect(findElement(after, "box")).toEqual({
            id: "box", kind: "rect",
            geometry: { x: 10, y: 20, width: 30, height: 12 },
            style: { color: "#cfd8dc", z: 2 },
            text: null, parent: null,
        });
    });

    it("gives lines their stroke default and z 1", () => {
        const after = applyEdit(scene(), {
            action: "create", target: "wire", kind: "line",
            props: { x: 10, y: 10, x1: 0, y1: 0, x2: 30, y2: 5 },
        });
        expect(findElement(after, "wire")).toMatchObject({
            geometry: { x1: 10, y1: 10, x2: 40, y2: 15 },
            style: { color: "#37474f", z: 1 },
        });
    });

    it("gives labels text and the text fill", () => {
        const after = applyEdit(scene(), {
            action: "create", target: "tag", kind: "label",
            props: { x: 5, y: 30, text: "hi" },
        });
        expect(findElement(after, "tag")).toMatchObject({
            style: { color: "#212121", z: 2 }, text: "hi",
        });
    });

    it("gives images the fixed 32 by 32 frame", () => {
        const after = applyEdit(scene(), {
            action: "create", target: "pic", kind: "image",
            props: { x: 1, y: 2, path: "pics/q.png" },
        });
        expect(findElement(after, "pic")!.geometry)
            .toEqual({ x: 1, y: 2, width: 32, height: 32, path: "pics/q.png" });
    });

    it("offsets polygon points by the origin", () => {
        const after = applyEdit(scene(), {
            action: "create", target: "tri", kind: "polygon",
            props: { x: 10, y: 10, points: [[0, 0], [40, 0], [20, 24]] },
        });
        expect(findElement(after, "tri")!.geometry)
            .toEqual({ points: [[10, 10], [50, 10], [30, 34]] });
    });

    it("accepts caption, colour and z overrides", () => {
        const after = applyEdit(scene(), {
            action: "create", target: "box", kind: "rect",
            props: { width: 8, height: 8, text: "Q", color: "#1f77b4", z: 5 },
        });
        expect(findElement(after, "box")).toMatchObject({
            geometry: { x: 0, y: 0 },
            style: { color: "#1f77b4", z: 5 }, text: "Q",
        });
    });

    it("stays inert on anything the server would reject", () => {
        const s = boardScene(QUEENS_4);
        const ok = { width: 8, height: 8 };
        expect(createGesture(s, "board", "rect", ok)).toBeNull();   // taken
        expect(createGesture(s, "Box", "rect", ok)).toBeNull();     // not a symbol
        expect(createGesture(s, "b-x", "rect", ok)).toBeNull();     // not a symbol
        expect(createGesture(s, "g2", "grid", ok)).toBeNull();      // wrong kind
        expect(createGesture(s, "box", "rect", {})).toBeNull();     // no size
        expect(createGesture(s, "tag", "label", { x: 1, y: 1 })).toBeNull();
        expect(createGesture(s, "pic", "image", { x: 1, y: 1 })).toBeNull();
        expect(createGesture(s, "tri", "polygon",
                             { points: [[0, 0], [1, 1]] })).toBeNull();
        expect(createGesture(s, "box", "rect",
                             { width: 8, height: 8, color: "Red" })).toBeNull();
        expect(createGesture(s, "box", "rect",
                             { width: 8, height: 8, color: "#12" })).toBeNull();
    });
});

describe("restyle and relabel", () => {
    it("recolours in place", () => {
        const s = boardScene(QUEENS_4);
        const payload = restyleGesture(s, "piece(2)", { color: "#d62728" });
        expect(payload).toEqual(
            { action: "restyle", target: "piece(2)", color: "#d62728" });
        const after = applyEdit(s, payload!);
        expect(findElement(after, "piece(2)")!.style.color).toBe("#d62728");
    });

    it("accepts colour names the vocabulary allows", () => {
        const s = boardScene(QUEENS_4);
        expect(restyleGesture(s, "piece(2)", { color: "salmon" })).not.toBeNull();
        expect(restyleGesture(s, "piece(2)", { color: "Salmon" })).toBeNull();
        expect(restyleGesture(s, "piece(2)", { color: "#ff00" })).toBeNull();
    });

    it("resorts the painting order when z changes", () => {
        const s = scene(
            el("a", "rect", { x: 0, y: 0, width: 4, height: 4 }),
            el("b", "rect", { x: 2, y: 2, width: 4, height: 4 }));
        const after = applyEdit(s, { action: "restyle", target: "b", z: -1.9 });
        expect(after.elements.map((e) => e.id)).toEqual(["b", "a"]);
        expect(findElement(after, "b")!.style.z).toBe(-1);
    });

    it("needs a colour or a z to do anything", () => {
        const s = boardScene(QUEENS_4);
        expect(restyleGesture(s, "piece(2)", {})).toBeNull();
        expect(restyleGesture(s, "ghost", { color: "red" })).toBeNull();
    });

    it("replaces the caption and regrows the canvas for labels", () => {
        const s = scene(el("tag", "label", { x: 100, y: 40 }, { text: "hi" }));
        expect(relabelGesture(s, "ghost", "x")).toBeNull();
        const payload = relabelGesture(s, "tag", "a much longer caption");
        const after = applyEdit(s, payload!);
        expect(findElement(after, "tag")!.text).toBe("a much longer caption");
        // 21 code points -> x 100 + 7*21 + 4 + margin
        expect(after.canvas.width).toBe(271);
    });
});

describe("applyEditList", () => {
    it("replays a batch in order and leaves the original alone", () => {
        const s = boardScene(QUEENS_4);
        const before = canonicalScene(s);
        const after = applyEditList(s, [
            { action: "move", target: "piece(2)", row: 2, col: 3 },
            { action: "restyle", target: "piece(2)", color: "#d62728" },
            { action: "delete", target: "piece(4)" },
        ]);
        expect(findElement(after, "piece(2)")!.parent!.col).toBe(3);
        expect(findElement(after, "piece(2)")!.style.color).toBe("#d62728");
        expect(findElement(after, "piece(4)")).toBeNull();
        expect(canonicalScene(s)).toBe(before);
    });
});

/* Shared test scaffolding: element builders for hand-made scenes and a
 * seeded generator so randomised cases replay identically run to run. */

import { refreshScene } from "../src/geometry.js";
import { Scene, SceneElement } from "../src/types.js";

export class Rng {
    private s: number;

    constructor(seed: number) {
        this.s = seed >>> 0;
    }

    next(): number {
        this.s = (this.s * 1664525 + 1013904223) >>> 0;
        return this.s / 4294967296;
    }

    // inclusive bounds
    int(lo: number, hi: number): number {
        return lo + Math.floor(this.next() * (hi - lo + 1));
    }

    pick<T>(items: readonly T[]): T {
        return items[this.int(0, items.length - 1)]!;
    }
}

interface Extra {
    color?: string;
    z?: number;
    text?: string | null;
    parent?: SceneElement["parent"];
}

export function el(id: string, kind: SceneElement["kind"],
                   geometry: SceneElement["geometry"],
                   extra: Extra = {}): SceneElement {
    return {
        id,
        kind,
        geometry,
        style: { color: extra.color ?? "#cfd8dc", z: extra.z ?? 2 },
        text: extra.text ?? null,
        parent: extra.parent ?? null,
    };
}

export function scene(...elements: SceneElement[]): Scene {
    return refreshScene(elements);
}

/* A 4x4 board at (20, 20) with cell size 24: one backing rect per square
 * and one 16x16 piece per queen, everything sitting on its slot.  Same
 * numbers the queens fixtures on the service side produce. */
export function boardScene(queens: Array<[number, number]>, size = 4): Scene {
    const origin = 20;
    const cell = 24;
    const elements: SceneElement[] = [
        el("board", "grid", {
            x: origin, y: origin, rows: size, cols: size,
            cell_width: cell, cell_height: cell,
        }, { color: "#90a4ae", z: 0 }),
    ];
    const slot = (row: number, col: number) => ({
        x: origin + (col - 1) * cell,
        y: origin + (row - 1) * cell,
    });
    for (let row = 1; row <= size; row++) {
        for (let col = 1; col <= size; col++) {
            elements.push(el(`cell(${row},${col})`, "rect", {
                ...slot(row, col), width: cell, height: cell,
            }, { parent: { id: "board", row, col } }));
        }
    }
    for (const [row, col] of queens) {
        elements.push(el(`piece(${row})`, "ellipse", {
            ...slot(row, col), width: 16, height: 16,
        }, { color: "black", parent: { id: "board", row, col } }));
    }
    return refreshScene(elements);
}

export const QUEENS_4 : Array<[number, number]> =
    [[1, 2], [2, 4], [3, 1], [4, 3]];

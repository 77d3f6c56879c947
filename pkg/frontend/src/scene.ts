/* Scene bookkeeping: lookups, deep copies, and one canonical JSON form.
 *
 * Scene equality throughout the editor means "canonical strings are equal":
 * elements in painting order, object keys in a fixed order, so two scenes
 * that drifted through different code paths still compare byte for byte. */

import { sortElements } from "./geometry.js";
import { GeometryValue, Scene, SceneElement } from "./types.js";

export function findElement(scene: Scene, id: string): SceneElement | null {
    for (const element of scene.elements) {
        if (element.id === id) {
            return element;
        }
    }
    return null;
}

export function elementIds(scene: Scene): Set<string> {
    return new Set(scene.elements.map((e) => e.id));
}

export function cloneScene(scene: Scene): Scene {
    return JSON.parse(JSON.stringify(scene)) as Scene;
}

function orderedGeometry(geometry: Record<string, GeometryValue>) {
    const out: Record<string, GeometryValue> = {};
    for (const key of Object.keys(geometry).sort()) {
        out[key] = geometry[key];
    }
    return out;
}

function orderedElement(element: SceneElement) {
    let parent: Record<string, unknown> | null = null;
    if (element.parent) {
        parent = { id: element.parent.id };
        if (element.parent.row !== undefined) {
            parent["row"] = element.parent.row;
        }
        if (element.parent.col !== undefined) {
            parent["col"] = element.parent.col;
        }
    }
    return {
        id: element.id,
        kind: element.kind,
        geometry: orderedGeometry(element.geometry),
        style: { color: element.style.color, z: element.style.z },
        text: element.text ?? null,
        parent,
    };
}

export function canonicalScene(scene: Scene): string {
    return JSON.stringify({
        canvas: { width: scene.canvas.width, height: scene.canvas.height },
        elements: sortElements(scene.elements).map(orderedElement),
    });
}

export function sameScene(left: Scene, right: Scene): boolean {
    return canonicalScene(left) === canonicalScene(right);
}

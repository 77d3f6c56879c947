/* Gestures and their local effect on the scene.
 *
 * Each gesture helper returns exactly one edit payload (or null when the
 * gesture is inert), and applyEdit replays that payload on the client's
 * scene the same way the service replays it over the vis atoms.  The two
 * must agree byte for byte: a gesture is only offered when its server-side
 * outcome is fully determined by the scene JSON alone, anything else stays
 * inert rather than guessing. */

import { num, refreshScene } from "./geometry.js";
import { cloneScene, findElement } from "./scene.js";
import { EditPayload, Scene, SceneElement } from "./types.js";

export class EditError extends Error {}

// service-side drawing defaults
export const SHAPE_FILL = "#cfd8dc";
export const LINE_STROKE = "#37474f";
export const TEXT_FILL = "#212121";
export const IMAGE_SIZE = 32;

const DEFAULT_Z: Record<string, number> = { grid: 0, line: 1, "graph-edge": 1 };

const CREATABLE = new Set(["rect", "ellipse", "line", "polygon", "label", "image"]);

// colours must survive the service's vocabulary check: a lowercase symbol
// or a #RRGGBB string, nothing else
const SYMBOL = /^[a-z][A-Za-z0-9_]*$/;
const HEX_COLOR = /^#[0-9A-Fa-f]{6}$/;

export function validColor(value: string): boolean {
    return SYMBOL.test(value) || HEX_COLOR.test(value);
}

// created ids are restricted to plain symbols so the id in the payload and
// the id in the rebuilt scene are the same text
export function validNewId(value: string): boolean {
    return SYMBOL.test(value);
}

// kinds whose geometry x/y is exactly the element origin
const ORIGIN_KINDS = new Set(
    ["rect", "ellipse", "image", "label", "grid", "graph-node"]);

function hasOrigin(element: SceneElement): boolean {
    return ORIGIN_KINDS.has(element.kind);
}

function gridSlot(grid: SceneElement, row: number, col: number): [number, number] {
    return [num(grid, "x") + (col - 1) * num(grid, "cell_width"),
            num(grid, "y") + (row - 1) * num(grid, "cell_height")];
}

function gridParent(scene: Scene, element: SceneElement): SceneElement | null {
    if (!element.parent || element.parent.row === undefined
            || element.parent.col === undefined) {
        return null;
    }
    const grid = findElement(scene, element.parent.id);
    return grid && grid.kind === "grid" ? grid : null;
}

// a grid-placed element can only be repositioned when it visibly sits on
// its slot; otherwise an explicit position overrides the cell on the
// server and the move would not do what the scene suggests
function onSlot(scene: Scene, element: SceneElement): boolean {
    const grid = gridParent(scene, element);
    if (!grid || !hasOrigin(element)) {
        return false;
    }
    const [sx, sy] = gridSlot(grid, element.parent!.row!, element.parent!.col!);
    return num(element, "x") === sx && num(element, "y") === sy;
}

// ---------------------------------------------------------------------------
// local replay

function shiftOrigin(scene: Scene, element: SceneElement,
                     dx: number, dy: number): void {
    element.geometry["x"] = num(element, "x") + dx;
    element.geometry["y"] = num(element, "y") + dy;
    if (element.kind === "grid") {
        for (const child of scene.elements) {
            if (child.parent?.id === element.id && hasOrigin(child)
                    && child.parent.row !== undefined
                    && child.parent.col !== undefined) {
                // children keep their slot only if they were on it; an
                // explicit position stays where it is
                const [sx, sy] = gridSlot(element, child.parent.row,
                                          child.parent.col);
                if (num(child, "x") === sx - dx && num(child, "y") === sy - dy) {
                    shiftOrigin(scene, child, dx, dy);
                }
            }
        }
    }
    if (element.kind === "graph-node") {
        for (const edge of scene.elements) {
            if (edge.kind !== "graph-edge" || !("x1" in edge.geometry)) {
                continue;
            }
            if (edge.geometry["from"] === element.id) {
                edge.geometry["x1"] = num(element, "x");
                edge.geometry["y1"] = num(element, "y");
            }
            if (edge.geometry["to"] === element.id) {
                edge.geometry["x2"] = num(element, "x");
                edge.geometry["y2"] = num(element, "y");
            }
        }
    }
}

function applyMove(scene: Scene, edit: EditPayload): void {
    const element = findElement(scene, edit.target);
    if (!element) {
        throw new EditError(`no element ${edit.target} to move`);
    }
    if (edit.row !== undefined && edit.col !== undefined) {
        const grid = gridParent(scene, element);
        if (!grid || !onSlot(scene, element)) {
            throw new EditError(`${edit.target} is not on a grid cell`);
        }
        const rows = num(grid, "rows");
        const cols = num(grid, "cols");
        if (edit.row < 1 || edit.row > rows || edit.col < 1 || edit.col > cols) {
            throw new EditError(`cell (${edit.row},${edit.col}) is outside `
                + `the ${rows}x${cols} grid ${grid.id}`);
        }
        const [nx, ny] = gridSlot(grid, edit.row, edit.col);
        shiftOrigin(scene, element, nx - num(element, "x"),
                    ny - num(element, "y"));
        element.parent = { id: grid.id, row: edit.row, col: edit.col };
        return;
    }
    if (edit.x === undefined || edit.y === undefined) {
        throw new EditError(`moving ${edit.target} needs a cell or a point`);
    }
    if (!hasOrigin(element) || gridParent(scene, element)) {
        throw new EditError(`${edit.target} cannot take a free position`);
    }
    shiftOrigin(scene, element, edit.x - num(element, "x"),
                edit.y - num(element, "y"));
}

function applyDelete(scene: Scene, edit: EditPayload): void {
    const element = findElement(scene, edit.target);
    if (!element) {
        throw new EditError(`no element ${edit.target} to delete`);
    }
    if (scene.elements.some((e) => e !== element
            && e.parent?.id === element.id)) {
        // removing a container re-anchors its children somewhere the scene
        // JSON alone cannot predict
        throw new EditError(`${edit.target} still has placed elements`);
    }
    const victims = new Set([element.id]);
    if (element.kind === "graph-node") {
        for (const edge of scene.elements) {
            if (edge.kind === "graph-edge"
                    && (edge.geometry["from"] === element.id
                        || edge.geometry["to"] === element.id)) {
                victims.add(edge.id);
            }
        }
    }
    scene.elements = scene.elements.filter((e) => !victims.has(e.id));
}

function intProp(props: Record<string, unknown>, name: string): number {
    const value = props[name];
    if (typeof value !== "number" || !Number.isFinite(value)) {
        throw new EditError(`create needs a numeric ${name}`);
    }
    return Math.trunc(value);
}

function applyCreate(scene: Scene, edit: EditPayload): void {
    const kind = edit.kind ?? "";
    if (!CREATABLE.has(kind)) {
        throw new EditError(`cannot create elements of kind ${kind}`);
    }
    if (findElement(scene, edit.target)) {
        throw new EditError(`element ${edit.target} already exists`);
    }
    const props = edit.props ?? {};
    const ox = "x" in props ? intProp(props, "x") : 0;
    const oy = "y" in props ? intProp(props, "y") : 0;

    let geometry: SceneElement["geometry"];
    let color = SHAPE_FILL;
    let text: string | null = null;
    if (kind === "rect" || kind === "ellipse") {
        geometry = { x: ox, y: oy, width: intProp(props, "width"),
                     height: intProp(props, "height") };
    } else if (kind === "line") {
        geometry = { x1: ox + intProp(props, "x1"), y1: oy + intProp(props, "y1"),
                     x2: ox + intProp(props, "x2"), y2: oy + intProp(props, "y2") };
        color = LINE_STROKE;
    } else if (kind === "polygon") {
        const raw = props["points"];
        if (!Array.isArray(raw) || raw.length < 3) {
            throw new EditError("creating a polygon needs at least 3 points");
        }
        geometry = { points: raw.map((p) => [ox + Math.trunc(p[0]),
                                             oy + Math.trunc(p[1])]) };
    } else if (kind === "label") {
        if (typeof props["text"] !== "string") {
            throw new EditError("creating a label needs text");
        }
        geometry = { x: ox, y: oy };
        color = TEXT_FILL;
        text = props["text"];
    } else { // image
        if (typeof props["path"] !== "string") {
            throw new EditError("creating an image needs a path");
        }
        geometry = { x: ox, y: oy, width: IMAGE_SIZE, height: IMAGE_SIZE,
                     path: props["path"] };
    }

    if (typeof props["text"] === "string" && kind !== "label") {
        text = props["text"];
    }
    if (typeof props["color"] === "string") {
        if (!validColor(props["color"])) {
            throw new EditError(`${props["color"]} is not a colour name or `
                + "a #RRGGBB string");
        }
        color = props["color"];
    }
    const z = "z" in props ? intProp(props, "z") : DEFAULT_Z[kind] ?? 2;
    scene.elements.push({
        id: edit.target,
        kind: kind as SceneElement["kind"],
        geometry,
        style: { color, z },
        text,
        parent: null,
    });
}

function applyRestyle(scene: Scene, edit: EditPayload): void {
    const element = findElement(scene, edit.target);
    if (!element) {
        throw new EditError(`no element ${edit.target} to restyle`);
    }
    if (edit.color !== undefined) {
        if (!validColor(edit.color)) {
            throw new EditError(`${edit.color} is not a colour name or `
                + "a #RRGGBB string");
        }
        element.style.color = edit.color;
    }
    if (edit.z !== undefined) {
        element.style.z = Math.trunc(edit.z);
    }
}

function applyRelabel(scene: Scene, edit: EditPayload): void {
    const element = findElement(scene, edit.target);
    if (!element) {
        throw new EditError(`no element ${edit.target} to relabel`);
    }
    element.text = edit.text ?? "";
}

export function applyEdit(scene: Scene, edit: EditPayload): Scene {
    const next = cloneScene(scene);
    if (edit.action === "move") {
        applyMove(next, edit);
    } else if (edit.action === "delete") {
        applyDelete(next, edit);
    } else if (edit.action === "create") {
        applyCreate(next, edit);
    } else if (edit.action === "restyle") {
        applyRestyle(next, edit);
    } else {
        applyRelabel(next, edit);
    }
    return refreshScene(next.elements);
}

export function applyEditList(scene: Scene, edits: EditPayload[]): Scene {
    let current = scene;
    for (const edit of edits) {
        current = applyEdit(current, edit);
    }
    return current;
}

// ---------------------------------------------------------------------------
// gesture layer: validate against the scene, emit one payload or stay inert

/* Drop a dragged element.  For a grid-placed element (x, y) is the release
 * point and selects the cell under it; for a free element (x, y) is the
 * requested new origin. */
export function moveGesture(scene: Scene, id: string,
                            x: number, y: number): EditPayload | null {
    const element = findElement(scene, id);
    if (!element) {
        return null;
    }
    const grid = gridParent(scene, element);
    if (grid) {
        if (!onSlot(scene, element)) {
            return null;
        }
        const col = Math.floor((x - num(grid, "x")) / num(grid, "cell_width")) + 1;
        const row = Math.floor((y - num(grid, "y")) / num(grid, "cell_height")) + 1;
        if (row < 1 || row > num(grid, "rows")
                || col < 1 || col > num(grid, "cols")) {
            return null;
        }
        return { action: "move", target: id, row, col };
    }
    if (!hasOrigin(element)) {
        return null;
    }
    return { action: "move", target: id, x: Math.round(x), y: Math.round(y) };
}

/* Delete everything selected: one payload per element that can go.  Grids
 * and graph containers with placed members stay. */
export function deleteGesture(scene: Scene,
                              selection: Iterable<string>): EditPayload[] {
    const payloads: EditPayload[] = [];
    const doomed = new Set<string>();
    for (const id of [...selection].sort()) {
        const element = findElement(scene, id);
        if (!element || doomed.has(id)) {
            continue;
        }
        if (scene.elements.some((e) => e.id !== id && !doomed.has(e.id)
                && e.parent?.id === id)) {
            continue;
        }
        payloads.push({ action: "delete", target: id });
        doomed.add(id);
        if (element.kind === "graph-node") {
            for (const edge of scene.elements) {
                if (edge.kind === "graph-edge"
                        && (edge.geometry["from"] === id
                            || edge.geometry["to"] === id)) {
                    doomed.add(edge.id);
                }
            }
        }
    }
    return payloads;
}

export function createGesture(scene: Scene, id: string, kind: string,
                              props: Record<string, unknown>): EditPayload | null {
    if (!validNewId(id) || findElement(scene, id) || !CREATABLE.has(kind)) {
        return null;
    }
    const payload: EditPayload = { action: "create", target: id, kind, props };
    try {
        applyEdit(scene, payload);
    } catch (error) {
        if (error instanceof EditError) {
            return null;
        }
        throw error;
    }
    return payload;
}

export function restyleGesture(scene: Scene, id: string,
                               style: { color?: string; z?: number }): EditPayload | null {
    const element = findElement(scene, id);
    if (!element || (style.color === undefined && style.z === undefined)) {
        return null;
    }
    if (style.color !== undefined && !validColor(style.color)) {
        return null;
    }
    const payload: EditPayload = { action: "restyle", target: id };
    if (style.color !== undefined) {
        payload.color = style.color;
    }
    if (style.z !== undefined) {
        payload.z = Math.trunc(style.z);
    }
    return payload;
}

export function relabelGesture(scene: Scene, id: string,
                               text: string): EditPayload | null {
    if (!findElement(scene, id)) {
        return null;
    }
    return { action: "relabel", target: id, text };
}

/* Browser shell: binds the session to the page.
 *
 * The SVG shown on screen is always renderForDom(state.scene); selection
 * highlights are DOM classes layered on top so the markup itself stays
 * identical to what the server would export. */

import { ApiClient } from "./api.js";
import {
    createGesture,
    deleteGesture,
    moveGesture,
    relabelGesture,
    restyleGesture,
} from "./edits.js";
import { num } from "./geometry.js";
import { renderForDom, renderScene } from "./render.js";
import { findElement } from "./scene.js";
import { EditorSession } from "./session.js";
import { diffLines, treeLines } from "./tree.js";

function byId<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) {
        throw new Error(`missing page element #${id}`);
    }
    return node as T;
}

interface DragTracker {
    id: string;
    startX: number;
    startY: number;
    grabDx: number;
    grabDy: number;
    moved: boolean;
}

class EditorApp {
    private session = new EditorSession(new ApiClient());
    private drag: DragTracker | null = null;

    private canvas = byId<HTMLDivElement>("canvas");
    private banner = byId<HTMLDivElement>("banner");
    private treeView = byId<HTMLPreElement>("tree");
    private diffView = byId<HTMLPreElement>("diff");

    init(): void {
        byId("load").addEventListener("click", () => void this.load());
        byId("abduce").addEventListener("click", () => void this.abduce());
        byId("undo").addEventListener("click", () => {
            if (this.session.state.undo()) {
                this.refresh();
            }
        });
        byId("redo").addEventListener("click", () => {
            if (this.session.state.redo()) {
                this.refresh();
            }
        });
        byId("delete").addEventListener("click", () => this.deleteSelection());
        byId("create").addEventListener("click", () => this.createFromPalette());
        byId("apply-style").addEventListener("click", () => this.applyInspector());
        byId("download").addEventListener("click", () => this.download());

        document.addEventListener("keydown", (event) => {
            if (event.target instanceof HTMLInputElement
                    || event.target instanceof HTMLTextAreaElement) {
                return;
            }
            if (event.key === "Delete" || event.key === "Backspace") {
                this.deleteSelection();
            } else if (event.key === "z" && (event.ctrlKey || event.metaKey)) {
                event.preventDefault();
                if (event.shiftKey ? this.session.state.redo()
                                   : this.session.state.undo()) {
                    this.refresh();
                }
            }
        });

        this.canvas.addEventListener("pointerdown", (e) => this.pointerDown(e));
        this.canvas.addEventListener("pointermove", (e) => this.pointerMove(e));
        this.canvas.addEventListener("pointerup", (e) => this.pointerUp(e));
        this.refresh();
    }

    // -- data loading -------------------------------------------------------

    private interpretationRef() {
        const label = byId<HTMLInputElement>("interp-label").value.trim();
        const facts = byId<HTMLTextAreaElement>("interp-facts").value.trim();
        if (label) {
            return { label };
        }
        if (facts) {
            return { facts };
        }
        return null;
    }

    private async load(): Promise<void> {
        const ref = this.interpretationRef();
        if (!ref) {
            this.showError("give an interpretation label or facts text");
            return;
        }
        const generic = byId<HTMLInputElement>("generic").checked;
        const program = byId<HTMLTextAreaElement>("program").value;
        const abducibles = byId<HTMLInputElement>("abducibles").value
            .split(",").map((s) => s.trim()).filter((s) => s.length > 0);
        const domains = byId<HTMLTextAreaElement>("domains").value;
        try {
            if (generic) {
                await this.session.loadGeneric(ref);
            } else {
                await this.session.loadVisualization(ref, {
                    program, abducibles, domains,
                });
            }
            this.clearError();
        } catch (error) {
            this.showError(String(error instanceof Error
                ? error.message : error));
        }
        this.refresh();
    }

    private async abduce(): Promise<void> {
        this.refresh();
        const outcome = await this.session.abduceAndShow();
        if (!outcome && this.session.lastError) {
            this.showError(`${this.session.lastError.code}: `
                + this.session.lastError.message);
        } else {
            this.clearError();
        }
        this.refresh();
    }

    // -- gestures -----------------------------------------------------------

    private scenePoint(event: PointerEvent): { x: number; y: number } {
        const svg = this.canvas.querySelector("svg");
        if (!svg) {
            return { x: event.offsetX, y: event.offsetY };
        }
        const box = svg.getBoundingClientRect();
        return { x: event.clientX - box.left, y: event.clientY - box.top };
    }

    private pointerDown(event: PointerEvent): void {
        const hit = (event.target as Element).closest("[data-id]");
        if (!hit) {
            this.session.state.select([]);
            this.refresh();
            return;
        }
        const id = hit.getAttribute("data-id")!;
        if (event.shiftKey) {
            const selection = new Set(this.session.state.selection);
            selection.add(id);
            this.session.state.select(selection);
        } else {
            this.session.state.select([id]);
        }
        const point = this.scenePoint(event);
        const element = findElement(this.session.state.scene, id);
        let grabDx = 0;
        let grabDy = 0;
        if (element && "x" in element.geometry) {
            grabDx = point.x - num(element, "x");
            grabDy = point.y - num(element, "y");
        }
        this.drag = { id, startX: point.x, startY: point.y,
                      grabDx, grabDy, moved: false };
        this.refresh();
    }

    private pointerMove(event: PointerEvent): void {
        if (!this.drag) {
            return;
        }
        const point = this.scenePoint(event);
        if (Math.abs(point.x - this.drag.startX) > 3
                || Math.abs(point.y - this.drag.startY) > 3) {
            this.drag.moved = true;
        }
    }

    private pointerUp(event: PointerEvent): void {
        const drag = this.drag;
        this.drag = null;
        if (!drag || !drag.moved) {
            return;
        }
        const point = this.scenePoint(event);
        const scene = this.session.state.scene;
        const element = findElement(scene, drag.id);
        if (!element) {
            return;
        }
        // grid drops use the pointer itself, free drops the grab-corrected
        // origin; moveGesture tells the two apart
        const gridded = element.parent?.row !== undefined;
        const payload = gridded
            ? moveGesture(scene, drag.id, point.x, point.y)
            : moveGesture(scene, drag.id,
                          point.x - drag.grabDx, point.y - drag.grabDy);
        if (this.session.gesture(payload)) {
            this.refresh();
        }
    }

    private deleteSelection(): void {
        const payloads = deleteGesture(this.session.state.scene,
                                       this.session.state.selection);
        if (this.session.gestureAll(payloads) > 0) {
            this.refresh();
        }
    }

    private createFromPalette(): void {
        const kind = byId<HTMLSelectElement>("palette-kind").value;
        const id = byId<HTMLInputElement>("palette-id").value.trim();
        const props: Record<string, unknown> = {
            x: Number(byId<HTMLInputElement>("palette-x").value || "0"),
            y: Number(byId<HTMLInputElement>("palette-y").value || "0"),
        };
        if (kind === "rect" || kind === "ellipse") {
            props["width"] = Number(byId<HTMLInputElement>("palette-w").value || "40");
            props["height"] = Number(byId<HTMLInputElement>("palette-h").value || "24");
        } else if (kind === "line") {
            props["x1"] = 0;
            props["y1"] = 0;
            props["x2"] = Number(byId<HTMLInputElement>("palette-w").value || "40");
            props["y2"] = Number(byId<HTMLInputElement>("palette-h").value || "24");
        } else if (kind === "label") {
            props["text"] = byId<HTMLInputElement>("palette-text").value || id;
        } else if (kind === "image") {
            props["path"] = byId<HTMLInputElement>("palette-text").value;
        } else if (kind === "polygon") {
            const w = Number(byId<HTMLInputElement>("palette-w").value || "40");
            const h = Number(byId<HTMLInputElement>("palette-h").value || "24");
            props["points"] = [[0, 0], [w, 0], [Math.trunc(w / 2), h]];
        }
        const payload = createGesture(this.session.state.scene, id, kind, props);
        if (this.session.gesture(payload)) {
            this.session.state.select([id]);
            this.refresh();
        } else {
            this.showError("cannot create: id taken, invalid, or bad properties");
        }
    }

    private applyInspector(): void {
        const selected = [...this.session.state.selection];
        if (selected.length !== 1) {
            return;
        }
        const id = selected[0];
        const color = byId<HTMLInputElement>("inspect-color").value.trim();
        const zText = byId<HTMLInputElement>("inspect-z").value.trim();
        const label = byId<HTMLInputElement>("inspect-label").value;
        const scene = this.session.state.scene;
        const element = findElement(scene, id);
        if (!element) {
            return;
        }
        let changed = false;
        const style: { color?: string; z?: number } = {};
        if (color && color !== element.style.color) {
            style.color = color;
        }
        if (zText && Number(zText) !== element.style.z) {
            style.z = Number(zText);
        }
        if (style.color !== undefined || style.z !== undefined) {
            changed = this.session.gesture(restyleGesture(scene, id, style))
                || changed;
        }
        if (label !== (element.text ?? "")) {
            changed = this.session.gesture(
                relabelGesture(this.session.state.scene, id, label)) || changed;
        }
        if (changed) {
            this.refresh();
        }
    }

    private download(): void {
        const markup = renderScene(this.session.state.scene);
        const blob = new Blob([markup], { type: "image/svg+xml" });
        const url = URL.createObjectURL(blob);
        const link = document.createElement("a");
        link.href = url;
        link.download = `${this.session.state.originalLabel ?? "scene"}.svg`;
        link.click();
        URL.revokeObjectURL(url);
    }

    // -- view ---------------------------------------------------------------

    private showError(message: string): void {
        this.banner.textContent = message;
        this.banner.classList.add("visible");
    }

    private clearError(): void {
        this.banner.textContent = "";
        this.banner.classList.remove("visible");
    }

    private refresh(): void {
        const state = this.session.state;
        this.canvas.innerHTML = renderForDom(state.scene);
        for (const id of state.selection) {
            for (const node of this.canvas.querySelectorAll("[data-id]")) {
                if (node.getAttribute("data-id") === id) {
                    node.classList.add("selected");
                }
            }
        }
        this.canvas.classList.toggle("locked", !this.session.editable());

        byId<HTMLButtonElement>("undo").disabled = !state.canUndo();
        byId<HTMLButtonElement>("redo").disabled = !state.canRedo();
        byId<HTMLButtonElement>("abduce").disabled = !this.session.editable();
        byId("pending").textContent = String(state.edits().length);

        const shown = state.lastAbduction;
        if (shown) {
            const label = shown.interpretation.label ?? "interpretation";
            this.treeView.textContent =
                treeLines(shown.interpretation.atoms, label).join("\n");
            const changes = diffLines(shown.diff);
            this.diffView.textContent = changes.length > 0
                ? changes.join("\n") : "(no change)";
        } else {
            this.treeView.textContent = "";
            this.diffView.textContent = "";
        }

        const inspector = byId<HTMLFieldSetElement>("inspector");
        const selected = [...state.selection];
        inspector.disabled = selected.length !== 1;
        if (selected.length === 1) {
            const element = findElement(state.scene, selected[0]);
            if (element) {
                byId<HTMLInputElement>("inspect-id").value = element.id;
                byId<HTMLInputElement>("inspect-color").value = element.style.color;
                byId<HTMLInputElement>("inspect-z").value = String(element.style.z);
                byId<HTMLInputElement>("inspect-label").value = element.text ?? "";
            }
        } else {
            byId<HTMLInputElement>("inspect-id").value = "";
        }
    }
}

addEventListener("DOMContentLoaded", () => {
    new EditorApp().init();
});

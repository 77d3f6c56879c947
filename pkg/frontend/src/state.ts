/* Editor state: the current scene, the selection, and the buffered edits.
 *
 * Undo entries snapshot the canonical scene JSON on both sides of an edit,
 * so undo-all is byte-for-byte by construction and the buffered payload
 * list is always exactly the edits still in effect, oldest first.  Nothing
 * here talks to the network; the session layer owns that. */

import { applyEdit, EditError } from "./edits.js";
import { canonicalScene, elementIds } from "./scene.js";
import { DiffResult, EditPayload, InterpretationBody, Scene } from "./types.js";

interface UndoEntry {
    edit: EditPayload;
    before: string;
    after: string;
}

export interface AbductionView {
    interpretation: InterpretationBody;
    diff: DiffResult;
}

export class EditorState {
    private current: Scene;
    private undoStack: UndoEntry[] = [];
    private redoStack: UndoEntry[] = [];

    selection = new Set<string>();
    originalLabel: string | null = null;
    lastAbduction: AbductionView | null = null;

    constructor(scene: Scene) {
        this.current = JSON.parse(canonicalScene(scene)) as Scene;
    }

    get scene(): Scene {
        return this.current;
    }

    load(scene: Scene, label: string | null = null): void {
        this.current = JSON.parse(canonicalScene(scene)) as Scene;
        this.undoStack = [];
        this.redoStack = [];
        this.selection.clear();
        this.originalLabel = label;
        this.lastAbduction = null;
    }

    /* Apply one gesture payload.  False means the edit was inert; the scene
     * and the stacks are untouched. */
    perform(edit: EditPayload | null): boolean {
        if (!edit) {
            return false;
        }
        let next: Scene;
        try {
            next = applyEdit(this.current, edit);
        } catch (error) {
            if (error instanceof EditError) {
                return false;
            }
            throw error;
        }
        this.undoStack.push({
            edit,
            before: canonicalScene(this.current),
            after: canonicalScene(next),
        });
        this.redoStack = [];
        this.current = next;
        this.pruneSelection();
        return true;
    }

    performAll(edits: EditPayload[]): number {
        let applied = 0;
        for (const edit of edits) {
            if (this.perform(edit)) {
                applied += 1;
            }
        }
        return applied;
    }

    canUndo(): boolean {
        return this.undoStack.length > 0;
    }

    canRedo(): boolean {
        return this.redoStack.length > 0;
    }

    undo(): boolean {
        const entry = this.undoStack.pop();
        if (!entry) {
            return false;
        }
        this.redoStack.push(entry);
        this.current = JSON.parse(entry.before) as Scene;
        this.pruneSelection();
        return true;
    }

    redo(): boolean {
        const entry = this.redoStack.pop();
        if (!entry) {
            return false;
        }
        this.undoStack.push(entry);
        this.current = JSON.parse(entry.after) as Scene;
        this.pruneSelection();
        return true;
    }

    /* The batch a single Abduce action sends: every edit still in effect. */
    edits(): EditPayload[] {
        return this.undoStack.map((entry) => entry.edit);
    }

    select(ids: Iterable<string>): void {
        const known = elementIds(this.current);
        this.selection = new Set([...ids].filter((id) => known.has(id)));
    }

    private pruneSelection(): void {
        const known = elementIds(this.current);
        for (const id of [...this.selection]) {
            if (!known.has(id)) {
                this.selection.delete(id);
            }
        }
    }
}

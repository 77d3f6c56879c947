/* One editing session: a loaded interpretation, its scene, the vis program
 * and abducible signature in use, and the abduction round trip.
 *
 * The client never rewrites the interpretation itself.  Gestures only touch
 * the local scene and the buffered payloads; semantics stay on the server
 * until an explicit abduce call sends the whole batch at once.  At most one
 * abduction is in flight, and while it runs the scene is read-only. */

import { ApiClient, ApiError } from "./api.js";
import { EditorState } from "./state.js";
import {
    AbduceResponse,
    EditPayload,
    InterpretationRef,
    Scene,
} from "./types.js";

export interface SessionSettings {
    program: string;
    dialect: "gringo" | "dlv";
    abducibles: string[];
    domains: string;
}

const EMPTY_SCENE: Scene = {
    canvas: { width: 120, height: 80 },
    elements: [],
};

export class EditorSession {
    readonly state: EditorState;
    settings: SessionSettings = {
        program: "",
        dialect: "gringo",
        abducibles: [],
        domains: "",
    };
    interpretation: InterpretationRef | null = null;
    generic = false;
    busy = false;
    lastError: { code: string; message: string } | null = null;

    constructor(readonly api: ApiClient) {
        this.state = new EditorState(EMPTY_SCENE);
    }

    async loadVisualization(ref: InterpretationRef,
                            settings: Partial<SessionSettings> = {}): Promise<Scene> {
        this.settings = { ...this.settings, ...settings };
        const response = await this.api.visualize({
            interpretation: ref,
            program: this.settings.program,
            dialect: this.settings.dialect,
        });
        this.interpretation = ref;
        this.generic = false;
        this.lastError = null;
        this.state.load(response.scene, ref.label ?? null);
        return this.state.scene;
    }

    /* The hypergraph view has no vis program behind it, so it loads
     * read-only: no edit can be replayed on the server. */
    async loadGeneric(ref: InterpretationRef): Promise<Scene> {
        const response = await this.api.visualize({
            interpretation: ref,
            generic: true,
        });
        this.interpretation = ref;
        this.generic = true;
        this.lastError = null;
        this.state.load(response.scene, ref.label ?? null);
        return this.state.scene;
    }

    editable(): boolean {
        return !this.generic && !this.busy && this.interpretation !== null;
    }

    gesture(payload: EditPayload | null): boolean {
        if (!this.editable()) {
            return false;
        }
        return this.state.perform(payload);
    }

    gestureAll(payloads: EditPayload[]): number {
        let applied = 0;
        for (const payload of payloads) {
            if (this.gesture(payload)) {
                applied += 1;
            }
        }
        return applied;
    }

    /* Send the buffered batch; on success the tree and diff views update,
     * on failure (abduction-unsat included) the scene stays as edited. */
    async abduceAndShow(): Promise<AbduceResponse | null> {
        if (this.busy || this.generic || !this.interpretation) {
            return null;
        }
        this.busy = true;
        try {
            const response = await this.api.abduce({
                interpretation: this.interpretation,
                program: this.settings.program,
                dialect: this.settings.dialect,
                abducibles: this.settings.abducibles,
                domains: this.settings.domains,
                edits: this.state.edits(),
            });
            this.state.lastAbduction = {
                interpretation: response.interpretation,
                diff: response.diff,
            };
            this.lastError = null;
            return response;
        } catch (error) {
            if (error instanceof ApiError) {
                this.lastError = { code: error.code, message: error.message };
                return null;
            }
            this.lastError = { code: "network", message: String(error) };
            return null;
        } finally {
            this.busy = false;
        }
    }
}

/* Wire types shared with the workbench service.  Shapes mirror the JSON
 * bodies the HTTP API sends and the schemas it ships; nothing here is
 * invented on the client side. */

export type GeometryValue = number | string | number[][];

export interface SceneElement {
    id: string;
    kind: "rect" | "ellipse" | "line" | "polygon" | "label" | "image"
        | "grid" | "graph-node" | "graph-edge";
    geometry: Record<string, GeometryValue>;
    style: { color: string; z: number };
    text: string | null;
    parent: { id: string; row?: number; col?: number } | null;
}

export interface Scene {
    canvas: { width: number; height: number };
    elements: SceneElement[];
}

/* One buffered edit, exactly the body POST /api/visualize and /api/abduce
 * accept in their "edits" arrays. */
export interface EditPayload {
    action: "move" | "delete" | "create" | "restyle" | "relabel";
    target: string;
    x?: number;
    y?: number;
    row?: number;
    col?: number;
    kind?: string;
    props?: Record<string, unknown>;
    color?: string;
    z?: number;
    text?: string;
}

export interface InterpretationRef {
    label?: string;
    facts?: string;
}

export interface InterpretationBody {
    label: string | null;
    atoms: string[];
}

export interface DiffResult {
    only_left: string[];
    only_right: string[];
    common: string[];
}

export interface VisualizeRequest {
    interpretation: InterpretationRef;
    program?: string;
    generic?: boolean;
    dialect?: "gringo" | "dlv";
    edits?: EditPayload[];
}

export interface VisualizeResponse {
    scene_id: string;
    scene: Scene;
    vis_atoms: string[];
}

export interface AbduceRequest {
    interpretation: InterpretationRef;
    program: string;
    dialect?: "gringo" | "dlv";
    abducibles: string[];
    domains?: string;
    edits?: EditPayload[];
}

export interface AbduceResponse {
    interpretation: InterpretationBody;
    diff: DiffResult;
    scene_id: string;
    scene: Scene;
}

export interface SolveRequest {
    sources?: string[];
    files?: string[];
    dialect?: "gringo" | "dlv";
    engine?: "internal" | "launch";
    launch?: string;
    limit?: number;
    extra_args?: string[];
}

export interface SolveResponse {
    engine: string;
    satisfiable: boolean | null;
    interpretations: InterpretationBody[];
}

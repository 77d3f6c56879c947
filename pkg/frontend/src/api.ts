/* Thin fetch client for the workbench API.  Server error envelopes become
 * ApiError values with their stable code; everything else is passed through
 * untouched. */

import {
    AbduceRequest,
    AbduceResponse,
    DiffResult,
    InterpretationBody,
    SolveRequest,
    SolveResponse,
    VisualizeRequest,
    VisualizeResponse,
} from "./types.js";

export class ApiError extends Error {
    constructor(readonly code: string, message: string,
                readonly status: number) {
        super(message);
    }
}

async function fail(response: Response): Promise<never> {
    let code = `http-${response.status}`;
    let message = response.statusText;
    try {
        const body = await response.json();
        if (body && body.error) {
            code = body.error.code ?? code;
            message = body.error.message ?? message;
        }
    } catch {
        // not an envelope; keep the transport-level description
    }
    throw new ApiError(code, message, response.status);
}

export class ApiClient {
    constructor(readonly baseUrl: string = "") {}

    private async json<T>(path: string, init?: RequestInit): Promise<T> {
        const response = await fetch(this.baseUrl + path, init);
        if (!response.ok) {
            await fail(response);
        }
        return await response.json() as T;
    }

    private post<T>(path: string, body: unknown): Promise<T> {
        return this.json<T>(path, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(body),
        });
    }

    health(): Promise<{ status: string; version: string }> {
        return this.json("/api/health");
    }

    solve(request: SolveRequest): Promise<SolveResponse> {
        return this.post("/api/solve", request);
    }

    listInterpretations(): Promise<{ labels: string[] }> {
        return this.json("/api/interpretations");
    }

    getInterpretation(label: string): Promise<InterpretationBody> {
        return this.json(`/api/interpretations/${encodeURIComponent(label)}`);
    }

    storeInterpretation(label: string, facts: string,
                        overwrite = false): Promise<{ label: string }> {
        return this.post("/api/interpretations", { label, facts, overwrite });
    }

    diff(left: { label?: string; facts?: string },
         right: { label?: string; facts?: string }): Promise<DiffResult> {
        return this.post("/api/diff", { left, right });
    }

    visualize(request: VisualizeRequest): Promise<VisualizeResponse> {
        return this.post("/api/visualize", request);
    }

    abduce(request: AbduceRequest): Promise<AbduceResponse> {
        return this.post("/api/abduce", request);
    }

    async sceneSvg(sceneId: string): Promise<string> {
        const response = await fetch(`${this.baseUrl}/api/scene/${sceneId}/svg`);
        if (!response.ok) {
            await fail(response);
        }
        return await response.text();
    }
}

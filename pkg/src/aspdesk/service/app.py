"""HTTP face of the workbench.

One FastAPI app per workspace. All semantics live in the core modules; the
handlers only translate between JSON bodies and core calls, and map the
exception hierarchy onto a stable error envelope.
"""

from dataclasses import replace
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import HTMLResponse, JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .. import __version__, analysis, interpretations, toolbridge
from ..engine import answer_sets
from ..errors import (
    AbductionUnsatError,
    AspDeskError,
    ConflictError,
    FormatError,
    LaunchError,
    NotFoundError,
    ToolFailureError,
    VisualizationUnsatError,
)
from ..model import Interpretation, atom_text, pretty_print
from ..parsing import parse, parse_ground_literal
from ..viz import (
    AbductionProblem,
    Scene,
    abduce,
    apply_edits,
    build_scene,
    eval_vis_program,
    export_svg,
    generic_scene,
)
from . import schemas
from .stores import Workspace

_STATUS = {
    NotFoundError: 404,
    ConflictError: 409,
    AbductionUnsatError: 422,
    VisualizationUnsatError: 422,
    LaunchError: 502,
    ToolFailureError: 502,
}


def _status_for(exc: AspDeskError) -> int:
    for cls, status in _STATUS.items():
        if isinstance(exc, cls):
            return status
    return 422


def _parse_program(source: str, dialect: str, filename: str = "<request>"):
    result = parse(source, dialect, filename=filename)
    errors = [d for d in result.diagnostics if d.severity == "error"]
    if errors:
        first = errors[0]
        raise FormatError(
            f"program does not parse ({len(errors)} errors); first: "
            f"{first.message} at line {first.span.start_line}")
    return result.program


def create_app(workspace_root: str | Path, *,
               static_dir: str | Path | None = None) -> FastAPI:
    workspace = Workspace(workspace_root)
    app = FastAPI(title="aspdesk", version=__version__)
    app.state.workspace = workspace

    @app.exception_handler(AspDeskError)
    async def _domain_error(_request: Request, exc: AspDeskError):
        return JSONResponse(
            status_code=_status_for(exc),
            content={"error": {"code": exc.code, "message": exc.message}})

    @app.exception_handler(RequestValidationError)
    async def _bad_request(_request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(p) for p in first.get("loc", ()))
        message = first.get("msg", "invalid request body")
        return JSONResponse(
            status_code=400,
            content={"error": {"code": "bad-request",
                               "message": f"{where}: {message}" if where else message}})

    def resolve(ref: schemas.InterpretationRef) -> Interpretation:
        if ref.label is not None:
            return workspace.get_interpretation(ref.label)
        return interpretations.from_facts(ref.facts)

    # -- health and parsing

    @app.get("/api/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/api/parse", response_model=schemas.ParseResponse)
    def parse_source(req: schemas.ParseRequest):
        result = parse(req.source, req.dialect, filename=req.filename)
        diagnostics = list(result.diagnostics)
        if req.lint:
            diagnostics += analysis.lint(result.program)
        return schemas.ParseResponse(
            dialect=req.dialect,
            rule_count=len(result.program.rules),
            diagnostics=[d.to_dict() for d in diagnostics],
            outline=analysis.build_outline(result.program, req.filename).to_dict(),
            pretty=pretty_print(result.program))

    # -- solving

    @app.post("/api/solve", response_model=schemas.SolveResponse)
    def solve(req: schemas.SolveRequest):
        if req.engine == "launch":
            registry = workspace.load_registry()
            if req.launch not in registry.launches:
                raise NotFoundError(f"no launch configuration {req.launch!r}")
            launch = registry.launches[req.launch]
            if req.files:
                launch = replace(launch, input_files=tuple(req.files))
            if req.extra_args:
                launch = toolbridge.with_extra_args(launch, req.extra_args)
            outcome = toolbridge.run(registry, launch)
            models = list(outcome.interpretations)
            if req.limit is not None:
                models = models[:req.limit]
            return schemas.SolveResponse(
                engine=f"launch:{req.launch}",
                satisfiable=outcome.satisfiable,
                interpretations=[_body(m) for m in models])

        pieces = [Path(f).read_text() for f in req.files] + list(req.sources)
        program = _parse_program("\n".join(pieces), req.dialect)
        models = answer_sets(program, limit=req.limit)
        return schemas.SolveResponse(
            engine="internal",
            satisfiable=bool(models),
            interpretations=[_body(m) for m in models])

    def _body(interp: Interpretation) -> schemas.InterpretationBody:
        return schemas.InterpretationBody(
            label=interp.label,
            atoms=[atom_text(l) for l in interp.sorted_literals()])

    # -- interpretation store

    @app.get("/api/interpretations")
    def list_interpretations():
        return {"labels": workspace.list_labels()}

    @app.get("/api/interpretations/{label}",
             response_model=schemas.InterpretationBody)
    def get_interpretation(label: str):
        return _body(workspace.get_interpretation(label))

    @app.post("/api/interpretations", response_model=schemas.StoreResponse)
    def store_interpretation(req: schemas.StoreRequest):
        interp = interpretations.from_facts(req.facts)
        changed = workspace.put_interpretation(req.label, interp,
                                               overwrite=req.overwrite)
        return schemas.StoreResponse(label=req.label, changed=changed,
                                     atom_count=len(interp))

    @app.delete("/api/interpretations/{label}")
    def delete_interpretation(label: str):
        workspace.delete_interpretation(label)
        return {"deleted": label}

    @app.post("/api/diff")
    def diff_interpretations(req: schemas.DiffRequest):
        return interpretations.diff(resolve(req.left), resolve(req.right)).to_dict()

    # -- scenes

    @app.post("/api/visualize", response_model=schemas.VisualizeResponse)
    def visualize(req: schemas.VisualizeRequest):
        if req.generic:
            if req.edits:
                raise FormatError("edits need a vis program, not a generic scene")
            scene = generic_scene(resolve(req.interpretation))
            atoms = []
        else:
            program = _parse_program(req.program, req.dialect)
            vis = eval_vis_program(program, resolve(req.interpretation))
            if req.edits:
                vis = apply_edits(vis, [e.to_edit() for e in req.edits])
            scene = build_scene(vis)
            atoms = [atom_text(l) for l in vis]
        scene_dict = scene.to_dict()
        return schemas.VisualizeResponse(
            scene_id=workspace.put_scene(scene_dict),
            scene=scene_dict,
            vis_atoms=atoms)

    @app.get("/api/scene/{scene_id}")
    def get_scene(scene_id: str):
        return workspace.get_scene(scene_id)

    @app.get("/api/scene/{scene_id}/svg")
    def get_scene_svg(scene_id: str):
        scene = Scene.from_dict(workspace.get_scene(scene_id))
        return Response(export_svg(scene), media_type="image/svg+xml")

    # -- abduction

    @app.post("/api/abduce", response_model=schemas.AbduceResponse)
    def abduce_edits(req: schemas.AbduceRequest):
        original = resolve(req.interpretation)
        program = _parse_program(req.program, req.dialect)
        if req.target_vis is not None:
            target = tuple(parse_ground_literal(t) for t in req.target_vis)
        else:
            target = eval_vis_program(program, original)
            if req.edits:
                target = apply_edits(target, [e.to_edit() for e in req.edits])
        pairs = req.abducible_pairs()
        domain = original.literals
        if req.domains:
            domain = domain | interpretations.from_facts(req.domains).literals
        problem = AbductionProblem(program, target, pairs,
                                   Interpretation(domain))
        found = abduce(problem)

        context = {l for l in original.literals
                   if (l.predicate, l.arity) not in pairs}
        updated = Interpretation(found.literals | context,
                                 label=original.label)
        scene_dict = build_scene(
            eval_vis_program(program, updated)).to_dict()
        return schemas.AbduceResponse(
            interpretation=_body(updated),
            diff=interpretations.diff(original, updated).to_dict(),
            scene_id=workspace.put_scene(scene_dict),
            scene=scene_dict)

    # -- tool registry

    @app.get("/api/tools", response_model=schemas.RegistryResponse)
    def registry_dump():
        registry = workspace.load_registry()
        return schemas.RegistryResponse(
            tools=[schemas.ToolBody(id=t.id, executable_path=t.executable_path,
                                    default_args=list(t.default_args), kind=t.kind)
                   for t in sorted(registry.tools.values(), key=lambda t: t.id)],
            pipelines=[schemas.PipelineBody(id=p.id, stages=list(p.stages))
                       for p in sorted(registry.pipelines.values(), key=lambda p: p.id)],
            launches=[schemas.LaunchBody(id=l.id, tool=l.tool,
                                         input_files=list(l.input_files),
                                         extra_args=list(l.extra_args),
                                         output_mode=l.output_mode)
                      for l in sorted(registry.launches.values(), key=lambda l: l.id)])

    @app.post("/api/tools/tool")
    def add_tool(body: schemas.ToolBody):
        registry = workspace.load_registry()
        registry.add_tool(toolbridge.ToolConfiguration(
            body.id, body.executable_path, tuple(body.default_args), body.kind))
        workspace.save_registry(registry)
        return {"added": body.id}

    @app.post("/api/tools/pipeline")
    def add_pipeline(body: schemas.PipelineBody):
        registry = workspace.load_registry()
        registry.add_pipeline(toolbridge.Pipeline(body.id, tuple(body.stages)))
        workspace.save_registry(registry)
        return {"added": body.id}

    @app.post("/api/tools/launch")
    def add_launch(body: schemas.LaunchBody):
        registry = workspace.load_registry()
        registry.add_launch(toolbridge.LaunchConfiguration(
            body.id, body.tool, tuple(body.input_files),
            tuple(body.extra_args), body.output_mode))
        workspace.save_registry(registry)
        return {"added": body.id}

    @app.delete("/api/tools/{kind}/{entry_id}")
    def remove_entry(kind: str, entry_id: str):
        registry = workspace.load_registry()
        if kind == "tool":
            registry.remove_tool(entry_id)
        elif kind == "pipeline":
            registry.remove_pipeline(entry_id)
        elif kind == "launch":
            registry.remove_launch(entry_id)
        else:
            raise NotFoundError(f"no registry section {kind!r}")
        workspace.save_registry(registry)
        return {"removed": entry_id}

    # -- static frontend

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="frontend")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index():
            return ("<!doctype html><title>aspdesk</title>"
                    "<p>aspdesk service is running; the editor UI is not "
                    "built. API under <code>/api</code>.</p>")

    return app

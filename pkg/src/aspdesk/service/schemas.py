"""Request and response bodies of the HTTP API."""

from typing import Any, Literal

from pydantic import BaseModel, Field, model_validator

from ..errors import FormatError
from ..parsing import parse_ground_term
from ..viz import (
    CreateEdit,
    DeleteEdit,
    Edit,
    MoveEdit,
    RelabelEdit,
    RestyleEdit,
)

DialectName = Literal["gringo", "dlv"]


class ParseRequest(BaseModel):
    source: str
    dialect: DialectName = "gringo"
    filename: str = "<input>"
    lint: bool = False


class ParseResponse(BaseModel):
    dialect: DialectName
    rule_count: int
    diagnostics: list[dict]
    outline: dict
    pretty: str


class SolveRequest(BaseModel):
    sources: list[str] = Field(default_factory=list)
    files: list[str] = Field(default_factory=list)
    dialect: DialectName = "gringo"
    engine: Literal["internal", "launch"] = "internal"
    launch: str | None = None
    limit: int | None = Field(default=None, ge=1)
    extra_args: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _coherent(self):
        if self.engine == "launch" and not self.launch:
            raise ValueError("engine 'launch' needs a launch id")
        if self.engine == "internal" and not (self.sources or self.files):
            raise ValueError("internal solving needs at least one source")
        return self


class InterpretationBody(BaseModel):
    label: str | None = None
    atoms: list[str]


class SolveResponse(BaseModel):
    engine: str
    satisfiable: bool | None
    interpretations: list[InterpretationBody]


class InterpretationRef(BaseModel):
    """A stored label or inline facts text; exactly one of the two."""

    label: str | None = None
    facts: str | None = None

    @model_validator(mode="after")
    def _one_of(self):
        if (self.label is None) == (self.facts is None):
            raise ValueError("give either a label or facts text")
        return self


class StoreRequest(BaseModel):
    label: str
    facts: str
    overwrite: bool = False


class StoreResponse(BaseModel):
    label: str
    changed: bool
    atom_count: int


class DiffRequest(BaseModel):
    left: InterpretationRef
    right: InterpretationRef


class EditBody(BaseModel):
    action: Literal["move", "delete", "create", "restyle", "relabel"]
    target: str
    x: float | None = None
    y: float | None = None
    row: int | None = None
    col: int | None = None
    kind: str | None = None
    props: dict[str, Any] = Field(default_factory=dict)
    color: str | None = None
    z: int | None = None
    text: str | None = None

    def to_edit(self) -> Edit:
        target = parse_ground_term(self.target)
        if self.action == "move":
            return MoveEdit(target, x=self.x, y=self.y,
                            row=self.row, col=self.col)
        if self.action == "delete":
            return DeleteEdit(target)
        if self.action == "create":
            if not self.kind:
                raise FormatError("a create edit needs a kind")
            return CreateEdit(target, self.kind, dict(self.props))
        if self.action == "restyle":
            return RestyleEdit(target, color=self.color, z=self.z)
        return RelabelEdit(target, text=self.text or "")


class VisualizeRequest(BaseModel):
    interpretation: InterpretationRef
    program: str | None = None
    generic: bool = False
    dialect: DialectName = "gringo"
    edits: list[EditBody] = Field(default_factory=list)

    @model_validator(mode="after")
    def _one_route(self):
        if self.generic == (self.program is not None):
            raise ValueError("give a vis program or set generic, not both")
        return self


class VisualizeResponse(BaseModel):
    scene_id: str
    scene: dict
    vis_atoms: list[str]


class AbduceRequest(BaseModel):
    interpretation: InterpretationRef
    program: str
    dialect: DialectName = "gringo"
    abducibles: list[str]
    domains: str = ""
    edits: list[EditBody] = Field(default_factory=list)
    target_vis: list[str] | None = None

    def abducible_pairs(self) -> frozenset[tuple[str, int]]:
        pairs = set()
        for spec in self.abducibles:
            name, sep, arity = spec.partition("/")
            if not sep or not name or not arity.isdigit():
                raise FormatError(
                    f"abducible {spec!r} is not of the form name/arity")
            pairs.add((name, int(arity)))
        return frozenset(pairs)


class AbduceResponse(BaseModel):
    interpretation: InterpretationBody
    diff: dict
    scene_id: str
    scene: dict


class ToolBody(BaseModel):
    id: str
    executable_path: str
    default_args: list[str] = Field(default_factory=list)
    kind: str = "generic"


class PipelineBody(BaseModel):
    id: str
    stages: list[str]


class LaunchBody(BaseModel):
    id: str
    tool: str
    input_files: list[str]
    extra_args: list[str] = Field(default_factory=list)
    output_mode: str = "raw"


class RegistryResponse(BaseModel):
    tools: list[ToolBody]
    pipelines: list[PipelineBody]
    launches: list[LaunchBody]

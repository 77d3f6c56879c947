"""External tool management: registry, piped execution, output parsing.

The registry persists as an INI file (one section per entry, lists encoded
shell-style) so it stays hand-editable. Runs build a true pipe: all stages
start concurrently, stdout of stage i feeds stdin of stage i+1, and stderr
of every stage is drained on threads so multi-megabyte chatter cannot
deadlock the pipe. Tools of kind dlv receive the input files as arguments;
every other kind gets the concatenated file contents on stdin.
"""

from __future__ import annotations

import os
import shlex
import subprocess
import tempfile
import threading
import time
from configparser import ConfigParser
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import FormatError, IntegrityError, LaunchError, NotFoundError, ToolFailureError
from .model import Interpretation
from .parsing import parse_ground_literal

TOOL_KINDS = ("gringo", "clasp", "dlv", "generic")
OUTPUT_MODES = ("raw", "parse_interpretations")


@dataclass(frozen=True)
class ToolConfiguration:
    id: str
    executable_path: str
    default_args: tuple[str, ...] = ()
    kind: str = "generic"

    def __post_init__(self):
        if not self.executable_path:
            raise IntegrityError(f"tool {self.id!r} has an empty executable path")
        if self.kind not in TOOL_KINDS:
            raise IntegrityError(
                f"tool {self.id!r} has unknown kind {self.kind!r}; "
                f"expected one of {', '.join(TOOL_KINDS)}")


@dataclass(frozen=True)
class Pipeline:
    id: str
    stages: tuple[str, ...]

    def __post_init__(self):
        if not self.stages:
            raise IntegrityError(f"pipeline {self.id!r} has no stages")


@dataclass(frozen=True)
class LaunchConfiguration:
    id: str
    tool: str  # a tool or pipeline id
    input_files: tuple[str, ...]
    extra_args: tuple[str, ...] = ()
    output_mode: str = "raw"

    def __post_init__(self):
        if not self.input_files:
            raise IntegrityError(f"launch {self.id!r} selects no input files")
        if self.output_mode not in OUTPUT_MODES:
            raise IntegrityError(
                f"launch {self.id!r} has unknown output mode {self.output_mode!r}")


@dataclass(frozen=True)
class RunResult:
    exit_codes: tuple[int, ...]
    raw_output: str
    raw_errors: str
    interpretations: tuple[Interpretation, ...] = ()
    satisfiable: bool | None = None
    duration_ms: int = 0


@dataclass
class Registry:
    tools: dict[str, ToolConfiguration] = field(default_factory=dict)
    pipelines: dict[str, Pipeline] = field(default_factory=dict)
    launches: dict[str, LaunchConfiguration] = field(default_factory=dict)

    # -- integrity

    def _check(self) -> None:
        for pipeline in self.pipelines.values():
            for stage in pipeline.stages:
                if stage not in self.tools:
                    raise IntegrityError(
                        f"pipeline {pipeline.id!r} references missing tool {stage!r}")
        for launch in self.launches.values():
            if launch.tool not in self.tools and launch.tool not in self.pipelines:
                raise IntegrityError(
                    f"launch {launch.id!r} references missing tool {launch.tool!r}")

    # -- CRUD

    def add_tool(self, tool: ToolConfiguration) -> None:
        self.tools[tool.id] = tool

    def add_pipeline(self, pipeline: Pipeline) -> None:
        self.pipelines[pipeline.id] = pipeline
        self._check()

    def add_launch(self, launch: LaunchConfiguration) -> None:
        self.launches[launch.id] = launch
        self._check()

    def remove_tool(self, tool_id: str) -> None:
        if tool_id not in self.tools:
            raise NotFoundError(f"no tool {tool_id!r}")
        users = [p.id for p in self.pipelines.values() if tool_id in p.stages]
        users += [l.id for l in self.launches.values() if l.tool == tool_id]
        if users:
            raise IntegrityError(
                f"tool {tool_id!r} is still referenced by: " + ", ".join(sorted(users)))
        del self.tools[tool_id]

    def remove_pipeline(self, pipeline_id: str) -> None:
        if pipeline_id not in self.pipelines:
            raise NotFoundError(f"no pipeline {pipeline_id!r}")
        users = [l.id for l in self.launches.values() if l.tool == pipeline_id]
        if users:
            raise IntegrityError(
                f"pipeline {pipeline_id!r} is still referenced by: "
                + ", ".join(sorted(users)))
        del self.pipelines[pipeline_id]

    def remove_launch(self, launch_id: str) -> None:
        if launch_id not in self.launches:
            raise NotFoundError(f"no launch {launch_id!r}")
        del self.launches[launch_id]

    def stages_for(self, launch: LaunchConfiguration) -> list[ToolConfiguration]:
        if launch.tool in self.tools:
            return [self.tools[launch.tool]]
        if launch.tool in self.pipelines:
            return [self.tools[s] for s in self.pipelines[launch.tool].stages]
        raise NotFoundError(f"launch {launch.id!r} references missing {launch.tool!r}")

    # -- persistence

    @classmethod
    def load(cls, path: str | Path) -> "Registry":
        registry = cls()
        path = Path(path)
        if not path.exists():
            return registry
        parser = ConfigParser()
        parser.read(path)
        for section in parser.sections():
            if ":" not in section:
                raise IntegrityError(
                    f"registry section {section!r} is not kind:id")
            kind, entry_id = section.split(":", 1)
            get = parser[section].get
            if kind == "tool":
                registry.tools[entry_id] = ToolConfiguration(
                    entry_id, get("executable_path", ""),
                    tuple(shlex.split(get("default_args", ""))),
                    get("kind", "generic"))
            elif kind == "pipeline":
                registry.pipelines[entry_id] = Pipeline(
                    entry_id, tuple(shlex.split(get("stages", ""))))
            elif kind == "launch":
                registry.launches[entry_id] = LaunchConfiguration(
                    entry_id, get("tool", ""),
                    tuple(shlex.split(get("input_files", ""))),
                    tuple(shlex.split(get("extra_args", ""))),
                    get("output_mode", "raw"))
            else:
                raise IntegrityError(f"registry section {section!r} has unknown kind")
        registry._check()
        return registry

    def save(self, path: str | Path) -> None:
        self._check()
        parser = ConfigParser()
        for tool in sorted(self.tools.values(), key=lambda t: t.id):
            parser[f"tool:{tool.id}"] = {
                "executable_path": tool.executable_path,
                "default_args": shlex.join(tool.default_args),
                "kind": tool.kind,
            }
        for pipeline in sorted(self.pipelines.values(), key=lambda p: p.id):
            parser[f"pipeline:{pipeline.id}"] = {"stages": shlex.join(pipeline.stages)}
        for launch in sorted(self.launches.values(), key=lambda l: l.id):
            parser[f"launch:{launch.id}"] = {
                "tool": launch.tool,
                "input_files": shlex.join(launch.input_files),
                "extra_args": shlex.join(launch.extra_args),
                "output_mode": launch.output_mode,
            }
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as handle:
                parser.write(handle)
            os.replace(tmp, path)  # atomic on the same filesystem
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


# ---------------------------------------------------------------------------
# execution

def _drain(stream, sink: list) -> threading.Thread:
    def read():
        sink.append(stream.read())
        stream.close()
    thread = threading.Thread(target=read, daemon=True)
    thread.start()
    return thread


def run(registry: Registry, launch: LaunchConfiguration, *,
        timeout: float = 60.0) -> RunResult:
    """Execute a launch as one pipe of processes.

    Input files are concatenated onto the first stage's stdin; dlv-kind
    stages additionally receive the file paths as arguments. extra_args go
    to the last stage (that is where the solver sits in a pipe).
    """
    stages = registry.stages_for(launch)
    stdin_text = ""
    for name in launch.input_files:
        path = Path(name)
        if not path.exists():
            raise LaunchError(f"input file {name!r} does not exist")
        stdin_text += path.read_text()

    started = time.monotonic()
    processes: list[subprocess.Popen] = []
    stderr_sinks: list[list] = []
    drains: list[threading.Thread] = []
    previous = None
    for i, tool in enumerate(stages):
        argv = [tool.executable_path, *tool.default_args]
        if tool.kind == "dlv":
            argv += list(launch.input_files)
        if i == len(stages) - 1:
            argv += list(launch.extra_args)
        try:
            proc = subprocess.Popen(
                argv,
                stdin=subprocess.PIPE if previous is None else previous.stdout,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True)
        except OSError as exc:
            for p in processes:
                p.kill()
            raise LaunchError(
                f"stage {i + 1} ({tool.id}): cannot start "
                f"{tool.executable_path!r}: {exc}") from None
        if previous is not None:
            previous.stdout.close()  # let the earlier stage see a broken pipe
        sink: list = []
        stderr_sinks.append(sink)
        drains.append(_drain(proc.stderr, sink))
        processes.append(proc)
        previous = proc

    first, last = processes[0], processes[-1]
    out_sink: list = []
    drains.append(_drain(last.stdout, out_sink))
    try:
        first.stdin.write(stdin_text)
        first.stdin.close()
    except BrokenPipeError:
        pass  # a stage that ignores stdin may exit before we finish writing

    deadline = started + timeout
    for proc in processes:
        remaining = deadline - time.monotonic()
        try:
            proc.wait(timeout=max(remaining, 0.001))
        except subprocess.TimeoutExpired:
            for p in processes:
                p.kill()
            raise LaunchError(
                f"launch {launch.id!r} exceeded its {timeout:.0f}s timeout",
                code="launch-timeout") from None
    for thread in drains:
        thread.join(timeout=10)

    raw_output = out_sink[0] if out_sink else ""
    raw_errors = "\n".join(s[0] for s in stderr_sinks if s and s[0])
    exit_codes = tuple(p.returncode for p in processes)
    duration = int((time.monotonic() - started) * 1000)

    if any(code != 0 for code in exit_codes) and not raw_output.strip():
        raise ToolFailureError(
            f"launch {launch.id!r} failed with exit codes {list(exit_codes)} "
            "and produced no output", raw_errors=raw_errors)

    interpretations: tuple[Interpretation, ...] = ()
    satisfiable = None
    if launch.output_mode == "parse_interpretations":
        flavor = "dlv_like" if stages[-1].kind == "dlv" else "clasp_like"
        models, satisfiable = parse_solver_output(raw_output, flavor)
        interpretations = tuple(models)
        if interpretations and satisfiable is None:
            satisfiable = True  # models witness satisfiability

    return RunResult(exit_codes, raw_output, raw_errors,
                     interpretations, satisfiable, duration)


# ---------------------------------------------------------------------------
# solver output parsing

_CLASP_VERDICTS = {"SATISFIABLE": True, "UNSATISFIABLE": False, "UNKNOWN": None}
_DLV_FAILURES = ("INCOHERENT", "UNSATISFIABLE", "INCONSISTENT")


def parse_solver_output(text: str, format: str) -> tuple[list[Interpretation], bool | None]:
    if format == "clasp_like":
        return _parse_clasp_like(text)
    if format == "dlv_like":
        return _parse_dlv_like(text)
    raise FormatError(f"unknown solver output format {format!r}")


def _literal_line(line: str, lineno: int) -> Interpretation:
    literals = []
    for token in line.split():
        try:
            literals.append(parse_ground_literal(token))
        except FormatError:
            raise FormatError(
                f"cannot read literal {token!r} in a model line", line=lineno) from None
    return Interpretation(frozenset(literals))


def _parse_clasp_like(text: str) -> tuple[list[Interpretation], bool | None]:
    models: list[Interpretation] = []
    satisfiable: bool | None = None
    lines = text.splitlines()
    saw_structure = False
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        if line.startswith("Answer:"):
            saw_structure = True
            tail = line[len("Answer:"):].strip()
            if not tail.isdigit():
                raise FormatError(f"malformed answer header {line!r}", line=i + 1)
            i += 1
            if i >= len(lines):
                raise FormatError("answer header without a model line", line=i)
            model_line = lines[i].strip()
            if model_line.startswith("Answer:") or model_line in _CLASP_VERDICTS:
                raise FormatError("answer header without a model line", line=i + 1)
            models.append(_literal_line(model_line, i + 1))  # blank = empty model
        elif line in _CLASP_VERDICTS:
            saw_structure = True
            satisfiable = _CLASP_VERDICTS[line]
        i += 1
    if not saw_structure and text.strip():
        raise FormatError("no answers and no verdict in solver output", line=1)
    return models, satisfiable


def _split_toplevel_commas(text: str, lineno: int) -> list[str]:
    """Split "a, f(1,2), b" on the commas outside parentheses and strings."""
    parts: list[str] = []
    depth = 0
    in_string = False
    current = ""
    for ch in text:
        if in_string:
            current += ch
            if ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            token = current.strip()
            if not token:
                raise FormatError("empty literal in model line", line=lineno)
            parts.append(token)
            current = ""
            continue
        current += ch
    tail = current.strip()
    if tail:
        parts.append(tail)
    elif parts:
        raise FormatError("empty literal in model line", line=lineno)
    return parts


def _parse_dlv_like(text: str) -> tuple[list[Interpretation], bool | None]:
    models: list[Interpretation] = []
    satisfiable: bool | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("Best model:"):
            line = line[len("Best model:"):].strip()
        if line.startswith("{") and line.endswith("}"):
            inner = line[1:-1].strip()
            literals = []
            for token in _split_toplevel_commas(inner, lineno):
                literals.append(parse_ground_literal(token))
            models.append(Interpretation(frozenset(literals)))
            satisfiable = True
        elif any(marker in line for marker in _DLV_FAILURES):
            satisfiable = False
    if not models and satisfiable is None and text.strip():
        raise FormatError("no models and no failure marker in solver output", line=1)
    return models, satisfiable


def with_extra_args(launch: LaunchConfiguration, args: list[str]) -> LaunchConfiguration:
    return replace(launch, extra_args=launch.extra_args + tuple(args))

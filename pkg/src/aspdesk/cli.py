"""Command-line client of the workbench service.

Every subcommand talks to the HTTP API: against a running server with
--server, otherwise against an in-process app bound to the workspace
directory. Exit codes: 0 success, 1 findings or unsat, 2 usage or
environment errors.
"""

import argparse
import asyncio
import json
import os
import sys
from pathlib import Path

import httpx

from . import __version__
from .errors import AspDeskError, UnknownDialectError
from .interpretations import from_facts, to_tree
from .model import Dialect
from .parsing import detect_dialect

_UNSAT_CODES = ("abduction-unsat", "visualization-unsat")


class CliFailure(Exception):
    def __init__(self, message, *, exit_code=2):
        super().__init__(message)
        self.exit_code = exit_code


# ---------------------------------------------------------------------------
# transport

class ServiceClient:
    """Uniform request interface over a remote URL or an in-process app."""

    def __init__(self, server: str | None, workspace: str):
        self._server = server
        self._workspace = workspace
        self._transport = None

    def _app_transport(self):
        if self._transport is None:
            from .service import create_app
            self._transport = httpx.ASGITransport(
                app=create_app(self._workspace, static_dir=_default_static()))
        return self._transport

    def request(self, method: str, path: str, body=None) -> httpx.Response:
        if self._server:
            with httpx.Client(base_url=self._server, timeout=300.0) as client:
                return client.request(method, path, json=body)

        async def go():
            async with httpx.AsyncClient(transport=self._app_transport(),
                                         base_url="http://aspdesk",
                                         timeout=300.0) as client:
                return await client.request(method, path, json=body)
        return asyncio.run(go())

    def call(self, method: str, path: str, body=None) -> dict:
        response = self.request(method, path, body)
        if response.status_code >= 400:
            try:
                error = response.json().get("error", {})
            except ValueError:
                error = {}
            code = error.get("code", f"http-{response.status_code}")
            message = error.get("message", response.text.strip())
            raise CliFailure(f"{code}: {message}",
                             exit_code=1 if code in _UNSAT_CODES else 2)
        return response.json()


def _default_static() -> str | None:
    candidate = Path(os.environ.get("ASPDESK_STATIC", "frontend/dist"))
    return str(candidate) if candidate.is_dir() else None


# ---------------------------------------------------------------------------
# shared option handling

def read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    target = Path(path)
    if not target.exists():
        raise CliFailure(f"no such file: {path}")
    return target.read_text()


def pick_dialect(args, files) -> str:
    if args.dialect:
        return args.dialect
    for name in files:
        if name == "-":
            continue
        try:
            return detect_dialect(name).value
        except UnknownDialectError as exc:
            raise CliFailure(f"{exc}; pass --dialect") from exc
    return Dialect.GRINGO.value


def emit(data) -> None:
    print(json.dumps(data, indent=1, sort_keys=True))


def print_diagnostics(diagnostics) -> None:
    for d in diagnostics:
        span = d["span"]
        print(f"{span['file']}:{span['start_line']}:{span['start_col']}: "
              f"{d['severity']} {d['code']}: {d['message']}")


def print_outline(node, indent=0) -> None:
    print("  " * indent + f"{node['kind']} {node['label']}")
    for child in node["children"]:
        print_outline(child, indent + 1)


def interpretation_ref(spec: str) -> dict:
    """A CLI interpretation argument: a readable file (or -) is facts text,
    anything else is a stored label."""
    if spec == "-" or Path(spec).is_file():
        return {"facts": read_source(spec)}
    return {"label": spec}


# ---------------------------------------------------------------------------
# subcommands

def cmd_parse(client, args, *, lint=False):
    source = read_source(args.file)
    dialect = pick_dialect(args, [args.file])
    data = client.call("POST", "/api/parse", {
        "source": source, "dialect": dialect,
        "filename": args.file, "lint": lint})
    findings = [d for d in data["diagnostics"] if d["severity"] == "error"]
    if args.json:
        emit({"dialect": data["dialect"], "rule_count": data["rule_count"],
              "diagnostics": data["diagnostics"]})
    else:
        print_diagnostics(data["diagnostics"])
    return 1 if findings else 0


def cmd_lint(client, args):
    return cmd_parse(client, args, lint=True)


def cmd_outline(client, args):
    source = read_source(args.file)
    dialect = pick_dialect(args, [args.file])
    data = client.call("POST", "/api/parse", {
        "source": source, "dialect": dialect, "filename": args.file})
    if args.json:
        emit(data["outline"])
    else:
        print_outline(data["outline"])
    errors = [d for d in data["diagnostics"] if d["severity"] == "error"]
    return 1 if errors else 0


def cmd_solve(client, args):
    body = {
        "dialect": pick_dialect(args, args.files),
        "limit": args.limit,
        "extra_args": args.extra_args or [],
    }
    if args.launch:
        body["engine"] = "launch"
        body["launch"] = args.launch
        body["files"] = [f for f in args.files if f != "-"]
    else:
        body["engine"] = "internal"
        body["sources"] = [read_source(f) for f in args.files]
    data = client.call("POST", "/api/solve", body)

    if args.json:
        emit(data)
    elif args.output == "tree":
        for i, interp in enumerate(data["interpretations"], start=1):
            parsed = from_facts(" ".join(a + "." for a in interp["atoms"]))
            print_outline(to_tree(parsed, f"answer {i}").to_dict())
    else:
        for i, interp in enumerate(data["interpretations"], start=1):
            print(f"answer {i}: " + " ".join(interp["atoms"]))
        verdict = data["satisfiable"]
        print({True: "satisfiable", False: "unsatisfiable",
               None: "unknown"}[verdict])
    no_model = data["satisfiable"] is False or not data["interpretations"]
    return 1 if no_model else 0


def cmd_interp(client, args):
    if args.interp_command == "list":
        data = client.call("GET", "/api/interpretations")
        if args.json:
            emit(data)
        else:
            for label in data["labels"]:
                print(label)
        return 0
    if args.interp_command == "show":
        data = client.call("GET", f"/api/interpretations/{args.label}")
        if args.json:
            emit({"interpretations": [data]})
        else:
            parsed = from_facts(" ".join(a + "." for a in data["atoms"]))
            print_outline(to_tree(parsed, args.label).to_dict())
        return 0
    if args.interp_command == "facts":
        data = client.call("GET", f"/api/interpretations/{args.label}")
        if args.json:
            emit({"interpretations": [data]})
        else:
            for atom in data["atoms"]:
                print(atom + ".")
        return 0
    if args.interp_command == "store":
        data = client.call("POST", "/api/interpretations", {
            "label": args.label, "facts": read_source(args.file),
            "overwrite": args.overwrite})
        if args.json:
            emit(data)
        else:
            print(f"stored {data['label']} ({data['atom_count']} atoms)")
        return 0
    if args.interp_command == "rm":
        client.call("DELETE", f"/api/interpretations/{args.label}")
        if not args.json:
            print(f"removed {args.label}")
        return 0
    # diff
    data = client.call("POST", "/api/diff", {
        "left": interpretation_ref(args.left),
        "right": interpretation_ref(args.right)})
    if args.json:
        emit(data)
    else:
        for atom in data["only_left"]:
            print("- " + atom)
        for atom in data["only_right"]:
            print("+ " + atom)
        print(f"= {len(data['common'])} common")
    return 0


def cmd_viz(client, args):
    body = {"interpretation": interpretation_ref(args.interpretation)}
    if args.program:
        body["program"] = read_source(args.program)
        body["dialect"] = pick_dialect(args, [args.program])
    else:
        body["generic"] = True
    data = client.call("POST", "/api/visualize", body)

    svg = client.request("GET", f"/api/scene/{data['scene_id']}/svg")
    if args.out:
        Path(args.out).write_text(svg.text)
    if args.scene_out:
        Path(args.scene_out).write_text(
            json.dumps(data["scene"], indent=1, sort_keys=True) + "\n")
    if args.json:
        emit(data)
    elif args.out:
        print(f"wrote {args.out} (scene {data['scene_id']})")
    else:
        sys.stdout.write(svg.text)
    return 0


def cmd_abduce(client, args):
    body = {
        "interpretation": interpretation_ref(args.interpretation),
        "program": read_source(args.program),
        "dialect": pick_dialect(args, [args.program]),
        "abducibles": args.abducibles,
    }
    if args.domain:
        body["domains"] = read_source(args.domain)
    if args.edits:
        edits = json.loads(read_source(args.edits))
        if not isinstance(edits, list):
            raise CliFailure("the edits file must hold a JSON list of edits")
        body["edits"] = edits
    data = client.call("POST", "/api/abduce", body)
    if args.json:
        emit(data)
    else:
        for atom in data["interpretation"]["atoms"]:
            print(atom + ".")
        diff = data["diff"]
        for atom in diff["only_left"]:
            print("- " + atom, file=sys.stderr)
        for atom in diff["only_right"]:
            print("+ " + atom, file=sys.stderr)
    return 0


def cmd_tools(client, args):
    command = args.tools_command
    if command == "list":
        data = client.call("GET", "/api/tools")
        if args.json:
            emit(data)
        else:
            for tool in data["tools"]:
                print(f"tool {tool['id']}: {tool['executable_path']} "
                      f"[{tool['kind']}]")
            for pipe in data["pipelines"]:
                print(f"pipeline {pipe['id']}: " + " | ".join(pipe["stages"]))
            for launch in data["launches"]:
                print(f"launch {launch['id']}: {launch['tool']} "
                      + " ".join(launch["input_files"]))
        return 0
    if command == "add-tool":
        client.call("POST", "/api/tools/tool", {
            "id": args.id, "executable_path": args.path,
            "default_args": args.args or [], "kind": args.kind})
    elif command == "add-pipeline":
        client.call("POST", "/api/tools/pipeline",
                    {"id": args.id, "stages": args.stages})
    elif command == "add-launch":
        client.call("POST", "/api/tools/launch", {
            "id": args.id, "tool": args.tool, "input_files": args.files,
            "extra_args": args.extra_args or [],
            "output_mode": args.output_mode})
    else:  # rm
        kind = {"rm-tool": "tool", "rm-pipeline": "pipeline",
                "rm-launch": "launch"}[command]
        client.call("DELETE", f"/api/tools/{kind}/{args.id}")
    if not args.json:
        print("ok")
    return 0


def cmd_serve(args):
    import uvicorn

    from .service import create_app
    static = args.static or _default_static()
    app = create_app(args.workspace, static_dir=static)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except OSError as exc:  # busy port and friends
        raise CliFailure(f"cannot serve on {args.host}:{args.port}: {exc}")
    return 0


# ---------------------------------------------------------------------------
# argument wiring

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dialect", choices=["gringo", "dlv"],
                        help="input language (default: by file extension)")
    common.add_argument("--json", action="store_true",
                        help="structured output")
    common.add_argument("--workspace",
                        default=os.environ.get("ASPDESK_WORKSPACE", ".aspdesk"),
                        help="workspace directory (default: .aspdesk)")
    common.add_argument("--server", default=None,
                        help="URL of a running service (default: in-process)")

    parser = argparse.ArgumentParser(
        prog="aspdesk",
        description="Workbench for answer-set programs: parse, lint, solve, "
                    "visualize, abduce.")
    parser.add_argument("--version", action="version",
                        version=f"aspdesk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common],
                       help="syntax-check a program file")
    p.add_argument("file")

    p = sub.add_parser("lint", parents=[common],
                       help="syntax plus safety and style checks")
    p.add_argument("file")

    p = sub.add_parser("outline", parents=[common],
                       help="structural outline of a program file")
    p.add_argument("file")

    p = sub.add_parser("solve", parents=[common],
                       help="enumerate answer sets")
    p.add_argument("files", nargs="+")
    p.add_argument("--launch", help="run a registered external tool instead "
                                    "of the internal engine")
    p.add_argument("--limit", type=int)
    p.add_argument("--output", choices=["raw", "facts", "tree"],
                   default="facts")
    p.add_argument("--extra-args", nargs="*", dest="extra_args")

    p = sub.add_parser("interp", parents=[common],
                       help="manage stored interpretations")
    isub = p.add_subparsers(dest="interp_command", required=True)
    isub.add_parser("list", parents=[common])
    for name in ("show", "facts", "rm"):
        ip = isub.add_parser(name, parents=[common])
        ip.add_argument("label")
    ip = isub.add_parser("store", parents=[common])
    ip.add_argument("label")
    ip.add_argument("file")
    ip.add_argument("--overwrite", action="store_true")
    ip = isub.add_parser("diff", parents=[common])
    ip.add_argument("left")
    ip.add_argument("right")

    p = sub.add_parser("viz", parents=[common],
                       help="render an interpretation to SVG")
    p.add_argument("interpretation", help="stored label or facts file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--program", help="visualization program file")
    group.add_argument("--generic", action="store_true",
                       help="generic hypergraph drawing")
    p.add_argument("--out", help="SVG output path (default: stdout)")
    p.add_argument("--scene-out", help="also write the scene JSON here")

    p = sub.add_parser("abduce", parents=[common],
                       help="turn edited vis atoms back into an interpretation")
    p.add_argument("interpretation", help="stored label or facts file")
    p.add_argument("--program", required=True)
    p.add_argument("--abducibles", nargs="+", required=True,
                   metavar="NAME/ARITY")
    p.add_argument("--domain", help="facts file of candidate atoms")
    p.add_argument("--edits", help="JSON file with the edit list")

    p = sub.add_parser("tools", parents=[common],
                       help="manage the external tool registry")
    tsub = p.add_subparsers(dest="tools_command", required=True)
    tsub.add_parser("list", parents=[common])
    tp = tsub.add_parser("add-tool", parents=[common])
    tp.add_argument("id")
    tp.add_argument("path")
    tp.add_argument("--args", nargs="*")
    tp.add_argument("--kind", default="generic",
                    choices=["gringo", "clasp", "dlv", "generic"])
    tp = tsub.add_parser("add-pipeline", parents=[common])
    tp.add_argument("id")
    tp.add_argument("stages", nargs="+")
    tp = tsub.add_parser("add-launch", parents=[common])
    tp.add_argument("id")
    tp.add_argument("tool")
    tp.add_argument("files", nargs="+")
    tp.add_argument("--extra-args", nargs="*", dest="extra_args")
    tp.add_argument("--output-mode", default="parse_interpretations",
                    choices=["raw", "parse_interpretations"])
    for name in ("rm-tool", "rm-pipeline", "rm-launch"):
        tp = tsub.add_parser(name, parents=[common])
        tp.add_argument("id")

    p = sub.add_parser("serve", parents=[common],
                       help="run the HTTP service and the editor UI")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8750)
    p.add_argument("--static", help="directory with the built UI")

    return parser


_COMMANDS = {
    "parse": cmd_parse,
    "lint": cmd_lint,
    "outline": cmd_outline,
    "solve": cmd_solve,
    "interp": cmd_interp,
    "viz": cmd_viz,
    "abduce": cmd_abduce,
    "tools": cmd_tools,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "serve":
            return cmd_serve(args)
        client = ServiceClient(args.server, args.workspace)
        return _COMMANDS[args.command](client, args)
    except CliFailure as exc:
        print(f"aspdesk: {exc}", file=sys.stderr)
        return exc.exit_code
    except AspDeskError as exc:
        print(f"aspdesk: {exc.code}: {exc.message}", file=sys.stderr)
        return 2
    except httpx.HTTPError as exc:
        print(f"aspdesk: cannot reach the service: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

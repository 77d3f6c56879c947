"""Editor gestures as minimal rewrites of a vis atom set.

Every edit returns a new sorted atom tuple touching as few atoms as the
gesture allows: a move rewrites one visposition (or one visfillgrid cell for
gridded elements), a delete cascades to attributes and graph members, a
create adds schema-complete atoms.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from ..errors import ConflictError, DanglingReferenceError, SceneError
from ..model import (
    Constant,
    GroundLiteral,
    Interpretation,
    Term,
    atom_key,
    pretty_print_term,
)
from .vocab import ELEMENT_PREDICATES

_SYMBOL = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class MoveEdit:
    target: Term
    x: int | None = None
    y: int | None = None
    row: int | None = None
    col: int | None = None


@dataclass(frozen=True)
class DeleteEdit:
    target: Term


@dataclass(frozen=True)
class CreateEdit:
    target: Term
    kind: str
    props: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RestyleEdit:
    target: Term
    color: str | None = None
    z: int | None = None


@dataclass(frozen=True)
class RelabelEdit:
    target: Term
    text: str = ""


Edit = MoveEdit | DeleteEdit | CreateEdit | RestyleEdit | RelabelEdit


def _int(value) -> Constant:
    return Constant(int(value))


def _text_term(value: str) -> Constant:
    escaped = str(value).replace("\\", "\\\\").replace('"', '\\"')
    return Constant(f'"{escaped}"')


def _color_term(value: str) -> Constant:
    if _SYMBOL.match(value):
        return Constant(value, "symbol")
    return _text_term(value)


def _atom_set(vis_atoms) -> set[GroundLiteral]:
    if isinstance(vis_atoms, Interpretation):
        return set(vis_atoms.literals)
    return set(vis_atoms)


def _defining(atoms, id_text: str) -> list[GroundLiteral]:
    return [l for l in atoms
            if (l.predicate in ELEMENT_PREDICATES or l.predicate == "vislabel")
            and pretty_print_term(l.args[0]) == id_text]


def _require_shape(defining, id_text: str, action: str) -> None:
    if any(l.predicate == "visgraph" for l in defining):
        raise SceneError(f"a graph has no drawable body to {action}: {id_text}")


def _grid_geometry(atoms, grid_text: str):
    for lit in atoms:
        if lit.predicate == "visgrid" and pretty_print_term(lit.args[0]) == grid_text:
            rows, cols, cell_w, cell_h = (a.value for a in lit.args[1:])
            break
    else:
        raise DanglingReferenceError(f"grid {grid_text} is not defined")
    gx = gy = 0
    for lit in atoms:
        if lit.predicate == "visposition" and pretty_print_term(lit.args[0]) == grid_text:
            gx, gy = lit.args[1].value, lit.args[2].value
    return rows, cols, cell_w, cell_h, gx, gy


def _move(atoms: set, edit: MoveEdit) -> None:
    id_text = pretty_print_term(edit.target)
    defining = _defining(atoms, id_text)
    if not defining:
        raise DanglingReferenceError(f"no element {id_text} to move")
    _require_shape(defining, id_text, "move")

    fills = [l for l in atoms if l.predicate == "visfillgrid"
             and pretty_print_term(l.args[3]) == id_text]
    if len(fills) > 1:
        raise ConflictError(f"element {id_text} is placed in two grid cells")
    if fills:
        fill = fills[0]
        grid_text = pretty_print_term(fill.args[0])
        rows, cols, cell_w, cell_h, gx, gy = _grid_geometry(atoms, grid_text)
        if edit.row is not None and edit.col is not None:
            row, col = edit.row, edit.col
        elif edit.x is not None and edit.y is not None:
            # point drops resolve against the grid's own origin; a grid that
            # is itself gridded needs a row/col move instead
            col = math.floor((edit.x - gx) / cell_w) + 1
            row = math.floor((edit.y - gy) / cell_h) + 1
        else:
            raise SceneError(f"moving gridded element {id_text} needs a cell "
                             f"or a point")
        if not (1 <= row <= rows) or not (1 <= col <= cols):
            raise SceneError(f"cell ({row},{col}) is outside the "
                             f"{rows}x{cols} grid {grid_text}")
        atoms.discard(fill)
        atoms.add(GroundLiteral("visfillgrid",
                                (fill.args[0], _int(row), _int(col),
                                 fill.args[3])))
        return

    if edit.x is None or edit.y is None:
        raise SceneError(f"moving free element {id_text} needs x and y")
    for lit in [l for l in atoms if l.predicate == "visposition"
                and pretty_print_term(l.args[0]) == id_text]:
        atoms.discard(lit)
    atoms.add(GroundLiteral("visposition",
                            (edit.target, _int(edit.x), _int(edit.y))))


def _delete(atoms: set, edit: DeleteEdit) -> None:
    id_text = pretty_print_term(edit.target)
    if not _defining(atoms, id_text):
        raise DanglingReferenceError(f"no element {id_text} to delete")

    victims = {id_text}
    while True:
        grown = set(victims)
        for lit in atoms:
            if lit.predicate in ("visnode", "visedge") \
                    and pretty_print_term(lit.args[-1]) in victims:
                grown.add(pretty_print_term(lit.args[0]))
            if lit.predicate == "visedge" \
                    and (pretty_print_term(lit.args[1]) in victims
                         or pretty_print_term(lit.args[2]) in victims):
                grown.add(pretty_print_term(lit.args[0]))
        if grown == victims:
            break
        victims = grown

    for lit in list(atoms):
        p = lit.predicate
        if p == "visfillgrid":
            if pretty_print_term(lit.args[0]) in victims \
                    or pretty_print_term(lit.args[3]) in victims:
                atoms.discard(lit)
        elif pretty_print_term(lit.args[0]) in victims:
            atoms.discard(lit)


_CREATABLE = frozenset({"rect", "ellipse", "line", "polygon", "label", "image"})


def _require_props(props: dict, kind: str, names: tuple[str, ...]) -> list:
    missing = [n for n in names if n not in props]
    if missing:
        raise SceneError(f"creating a {kind} needs {', '.join(names)}")
    return [props[n] for n in names]


def _create(atoms: set, edit: CreateEdit) -> None:
    id_text = pretty_print_term(edit.target)
    if _defining(atoms, id_text):
        raise ConflictError(f"element {id_text} already exists")
    if edit.kind not in _CREATABLE:
        raise SceneError(f"cannot create elements of kind {edit.kind!r}")

    props = dict(edit.props)
    target = edit.target
    if edit.kind in ("rect", "ellipse"):
        width, height = _require_props(props, edit.kind, ("width", "height"))
        atoms.add(GroundLiteral("vis" + edit.kind,
                                (target, _int(width), _int(height))))
    elif edit.kind == "line":
        coords = _require_props(props, "line", ("x1", "y1", "x2", "y2"))
        atoms.add(GroundLiteral("visline",
                                (target, *(_int(c) for c in coords))))
    elif edit.kind == "polygon":
        points = props.get("points") or []
        if len(points) < 3:
            raise SceneError("creating a polygon needs at least 3 points")
        for index, (px, py) in enumerate(points, start=1):
            atoms.add(GroundLiteral("vispolygon",
                                    (target, _int(index), _int(px), _int(py))))
    elif edit.kind == "label":
        (text,) = _require_props(props, "label", ("text",))
        atoms.add(GroundLiteral("vislabel", (target, _text_term(text))))
    else:  # image
        (path,) = _require_props(props, "image", ("path",))
        atoms.add(GroundLiteral("visimage", (target, _text_term(path))))

    if "x" in props and "y" in props:
        atoms.add(GroundLiteral("visposition",
                                (target, _int(props["x"]), _int(props["y"]))))
    if "color" in props:
        atoms.add(GroundLiteral("viscolor",
                                (target, _color_term(props["color"]))))
    if "z" in props:
        atoms.add(GroundLiteral("viszorder", (target, _int(props["z"]))))
    if "text" in props and edit.kind != "label":
        atoms.add(GroundLiteral("vislabel",
                                (target, _text_term(props["text"]))))


def _replace_attribute(atoms: set, target: Term, predicate: str,
                       value: Constant) -> None:
    id_text = pretty_print_term(target)
    for lit in [l for l in atoms if l.predicate == predicate
                and pretty_print_term(l.args[0]) == id_text]:
        atoms.discard(lit)
    atoms.add(GroundLiteral(predicate, (target, value)))


def _restyle(atoms: set, edit: RestyleEdit) -> None:
    id_text = pretty_print_term(edit.target)
    defining = _defining(atoms, id_text)
    if not defining:
        raise DanglingReferenceError(f"no element {id_text} to restyle")
    _require_shape(defining, id_text, "restyle")
    if edit.color is not None:
        _replace_attribute(atoms, edit.target, "viscolor",
                           _color_term(edit.color))
    if edit.z is not None:
        _replace_attribute(atoms, edit.target, "viszorder", _int(edit.z))


def _relabel(atoms: set, edit: RelabelEdit) -> None:
    id_text = pretty_print_term(edit.target)
    defining = _defining(atoms, id_text)
    if not defining:
        raise DanglingReferenceError(f"no element {id_text} to relabel")
    _require_shape(defining, id_text, "relabel")
    _replace_attribute(atoms, edit.target, "vislabel", _text_term(edit.text))


def apply_edit(vis_atoms, edit: Edit) -> tuple[GroundLiteral, ...]:
    atoms = _atom_set(vis_atoms)
    if isinstance(edit, MoveEdit):
        _move(atoms, edit)
    elif isinstance(edit, DeleteEdit):
        _delete(atoms, edit)
    elif isinstance(edit, CreateEdit):
        _create(atoms, edit)
    elif isinstance(edit, RestyleEdit):
        _restyle(atoms, edit)
    elif isinstance(edit, RelabelEdit):
        _relabel(atoms, edit)
    else:
        raise SceneError(f"unknown edit {edit!r}")
    return tuple(sorted(atoms, key=atom_key))


def apply_edits(vis_atoms, edits) -> tuple[GroundLiteral, ...]:
    atoms = _atom_set(vis_atoms)
    result = tuple(sorted(atoms, key=atom_key))
    for edit in edits:
        result = apply_edit(result, edit)
    return result

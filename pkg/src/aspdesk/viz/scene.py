"""Scene construction: vocabulary atoms in, drawable geometry out.

build_scene works in passes so atom order never matters: element-defining
atoms first, labels (which either attach or create), then attributes, then
reference resolution and placement.  Grid placement is exact integer
arithmetic; graph members without an explicit position get a force-directed
spot; an explicit visposition always wins.

generic_scene draws an interpretation as a labelled hypergraph: one node per
individual, one hub per literal, spokes numbered by argument position.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ConflictError, DanglingReferenceError, SceneError
from ..model import (
    GroundLiteral,
    Interpretation,
    atom_key,
    atom_text,
    pretty_print_term,
    term_key,
)
from . import layout
from .vocab import check_vis_literals, display_text

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
)

SHAPE_FILL = "#cfd8dc"
NODE_FILL = "#eceff1"
LINE_STROKE = "#37474f"
GRID_STROKE = "#90a4ae"
TEXT_FILL = "#212121"

NODE_RADIUS = 16.0
IMAGE_SIZE = 32
MARGIN = 20.0

# painting defaults when no viszorder is given: grids under connectors under
# everything else
_DEFAULT_Z = {"grid": 0, "line": 1, "graph-edge": 1}


@dataclass
class SceneElement:
    id: str
    kind: str
    geometry: dict
    color: str
    z: int = 0
    text: str | None = None
    parent: dict | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "geometry": dict(self.geometry),
            "style": {"color": self.color, "z": self.z},
            "text": self.text,
            "parent": dict(self.parent) if self.parent else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SceneElement":
        return cls(
            id=data["id"],
            kind=data["kind"],
            geometry=dict(data["geometry"]),
            color=data["style"]["color"],
            z=data["style"]["z"],
            text=data.get("text"),
            parent=dict(data["parent"]) if data.get("parent") else None,
        )


@dataclass
class Scene:
    elements: list[SceneElement] = field(default_factory=list)
    width: float = 120.0
    height: float = 80.0

    def to_dict(self) -> dict:
        return {
            "canvas": {"width": self.width, "height": self.height},
            "elements": [e.to_dict() for e in self.elements],
        }

    def element(self, element_id: str) -> SceneElement | None:
        for candidate in self.elements:
            if candidate.id == element_id:
                return candidate
        return None

    @classmethod
    def from_dict(cls, data: dict) -> "Scene":
        return cls(
            elements=[SceneElement.from_dict(e) for e in data["elements"]],
            width=data["canvas"]["width"],
            height=data["canvas"]["height"],
        )


def _literal_list(vis_atoms) -> list[GroundLiteral]:
    if isinstance(vis_atoms, Interpretation):
        return vis_atoms.sorted_literals()
    return sorted(vis_atoms, key=atom_key)


@dataclass
class _Rec:
    id: str
    kind: str
    lit: GroundLiteral
    width: int = 0
    height: int = 0
    raw_line: tuple | None = None
    vertices: dict = field(default_factory=dict)
    rows: int = 0
    cols: int = 0
    cell_w: int = 0
    cell_h: int = 0
    path: str | None = None
    graph: str | None = None
    ends: tuple | None = None
    text: str | None = None
    color: str | None = None
    z: int | None = None
    pos: tuple | None = None
    cell: tuple | None = None


class _Builder:
    def __init__(self, literals: list[GroundLiteral]):
        self.literals = literals
        self.recs: dict[str, _Rec] = {}
        self.graphs: set[str] = set()

    # -- pass 1: definitions ------------------------------------------------

    def _define(self, lit: GroundLiteral, kind: str) -> _Rec:
        id_text = pretty_print_term(lit.args[0])
        if id_text in self.recs or id_text in self.graphs:
            raise ConflictError(f"element id {id_text} is defined twice "
                                f"(second definition: {atom_text(lit)})")
        rec = _Rec(id=id_text, kind=kind, lit=lit)
        self.recs[id_text] = rec
        return rec

    def definitions(self) -> None:
        for lit in self.literals:
            p = lit.predicate
            if p in ("visrect", "visellipse"):
                rec = self._define(lit, "rect" if p == "visrect" else "ellipse")
                rec.width = lit.args[1].value
                rec.height = lit.args[2].value
            elif p == "visline":
                rec = self._define(lit, "line")
                rec.raw_line = tuple(a.value for a in lit.args[1:])
            elif p == "vispolygon":
                self._polygon_vertex(lit)
            elif p == "visimage":
                rec = self._define(lit, "image")
                rec.path = display_text(lit.args[1])
                rec.width = rec.height = IMAGE_SIZE
            elif p == "visgrid":
                rec = self._define(lit, "grid")
                rec.rows, rec.cols, rec.cell_w, rec.cell_h = (
                    a.value for a in lit.args[1:])
                if rec.rows < 1 or rec.cols < 1:
                    raise SceneError(f"grid needs at least one row and column: "
                                     f"{atom_text(lit)}")
            elif p == "visgraph":
                id_text = pretty_print_term(lit.args[0])
                if id_text in self.recs or id_text in self.graphs:
                    raise ConflictError(f"element id {id_text} is defined twice "
                                        f"(second definition: {atom_text(lit)})")
                self.graphs.add(id_text)
            elif p == "visnode":
                rec = self._define(lit, "graph-node")
                rec.graph = pretty_print_term(lit.args[1])
            elif p == "visedge":
                rec = self._define(lit, "graph-edge")
                rec.ends = (pretty_print_term(lit.args[1]),
                            pretty_print_term(lit.args[2]))
                rec.graph = pretty_print_term(lit.args[3])

    def _polygon_vertex(self, lit: GroundLiteral) -> None:
        id_text = pretty_print_term(lit.args[0])
        rec = self.recs.get(id_text)
        if rec is None:
            if id_text in self.graphs:
                raise ConflictError(f"element id {id_text} is defined twice "
                                    f"(second definition: {atom_text(lit)})")
            rec = _Rec(id=id_text, kind="polygon", lit=lit)
            self.recs[id_text] = rec
        elif rec.kind != "polygon":
            raise ConflictError(f"element id {id_text} is defined twice "
                                f"(second definition: {atom_text(lit)})")
        index = lit.args[1].value
        if index in rec.vertices:
            raise ConflictError(f"polygon {id_text} has two vertices with "
                                f"index {index}")
        rec.vertices[index] = (lit.args[2].value, lit.args[3].value)

    # -- pass 2: labels and attributes --------------------------------------

    def labels(self) -> None:
        for lit in self.literals:
            if lit.predicate != "vislabel":
                continue
            id_text = pretty_print_term(lit.args[0])
            value = display_text(lit.args[1])
            rec = self.recs.get(id_text)
            if rec is None:
                if id_text in self.graphs:
                    raise SceneError(f"a graph has no drawable body to label: "
                                     f"{atom_text(lit)}")
                rec = _Rec(id=id_text, kind="label", lit=lit, text=value)
                self.recs[id_text] = rec
            elif rec.text is not None:
                raise ConflictError(f"element {id_text} has two labels")
            else:
                rec.text = value

    def _target(self, lit: GroundLiteral) -> _Rec:
        id_text = pretty_print_term(lit.args[0])
        rec = self.recs.get(id_text)
        if rec is None:
            raise DanglingReferenceError(
                f"{atom_text(lit)} references unknown element {id_text}")
        return rec

    def attributes(self) -> None:
        for lit in self.literals:
            p = lit.predicate
            if p == "visposition":
                rec = self._target(lit)
                if rec.pos is not None:
                    raise ConflictError(f"element {rec.id} has two positions")
                rec.pos = (lit.args[1].value, lit.args[2].value)
            elif p == "viscolor":
                rec = self._target(lit)
                if rec.color is not None:
                    raise ConflictError(f"element {rec.id} has two colours")
                rec.color = display_text(lit.args[1])
            elif p == "viszorder":
                rec = self._target(lit)
                if rec.z is not None:
                    raise ConflictError(f"element {rec.id} has two z-orders")
                rec.z = lit.args[1].value
            elif p == "visfillgrid":
                self._fill(lit)

    def _fill(self, lit: GroundLiteral) -> None:
        grid_text = pretty_print_term(lit.args[0])
        elem_text = pretty_print_term(lit.args[3])
        grid = self.recs.get(grid_text)
        if grid is None:
            raise DanglingReferenceError(
                f"{atom_text(lit)} references unknown grid {grid_text}")
        if grid.kind != "grid":
            raise SceneError(f"{grid_text} is not a grid: {atom_text(lit)}")
        elem = self.recs.get(elem_text)
        if elem is None:
            raise DanglingReferenceError(
                f"{atom_text(lit)} references unknown element {elem_text}")
        row = lit.args[1].value
        col = lit.args[2].value
        if not (1 <= row <= grid.rows) or not (1 <= col <= grid.cols):
            raise SceneError(f"cell ({row},{col}) is outside the "
                             f"{grid.rows}x{grid.cols} grid {grid_text}")
        if elem.cell is not None:
            raise ConflictError(f"element {elem_text} is placed in two grid cells")
        elem.cell = (grid_text, row, col)

    # -- pass 3: reference checks and placement -----------------------------

    def resolve(self) -> None:
        for rec in self.recs.values():
            if rec.kind == "polygon" and len(rec.vertices) < 3:
                raise SceneError(f"polygon {rec.id} has fewer than 3 vertices")
            if rec.kind in ("graph-node", "graph-edge"):
                if rec.graph not in self.graphs:
                    raise DanglingReferenceError(
                        f"{atom_text(rec.lit)} references unknown graph {rec.graph}")
            if rec.kind == "graph-edge":
                for end in rec.ends:
                    node = self.recs.get(end)
                    if node is None:
                        raise DanglingReferenceError(
                            f"{atom_text(rec.lit)} references unknown node {end}")
                    if node.kind != "graph-node" or node.graph != rec.graph:
                        raise SceneError(
                            f"edge {rec.id} endpoint {end} is not a node of "
                            f"graph {rec.graph}")

    def place(self) -> dict[str, tuple]:
        computed: dict[str, tuple] = {}
        for graph in sorted(self.graphs):
            nodes = sorted(r.id for r in self.recs.values()
                           if r.kind == "graph-node" and r.graph == graph)
            index = {node: i for i, node in enumerate(nodes)}
            edges = sorted((index[r.ends[0]], index[r.ends[1]])
                           for r in self.recs.values()
                           if r.kind == "graph-edge" and r.graph == graph)
            computed.update(layout.spread(nodes, edges))

        origins: dict[str, tuple] = {}

        def origin(rec: _Rec, visiting: frozenset) -> tuple:
            if rec.id in origins:
                return origins[rec.id]
            if rec.pos is not None:
                result = rec.pos
            elif rec.cell is not None:
                if rec.id in visiting:
                    raise SceneError(f"grid placement of {rec.id} is circular")
                grid = self.recs[rec.cell[0]]
                gx, gy = origin(grid, visiting | {rec.id})
                result = (gx + (rec.cell[2] - 1) * grid.cell_w,
                          gy + (rec.cell[1] - 1) * grid.cell_h)
            elif rec.kind == "graph-node":
                result = computed[rec.id]
            else:
                result = (0, 0)
            origins[rec.id] = result
            return result

        for rec in self.recs.values():
            origin(rec, frozenset())
        return origins

    def build(self) -> Scene:
        self.definitions()
        self.labels()
        self.attributes()
        self.resolve()
        origins = self.place()

        elements = []
        for rec in self.recs.values():
            x, y = origins[rec.id]
            kind = rec.kind
            if kind in ("rect", "ellipse", "image"):
                geometry = {"x": x, "y": y, "width": rec.width,
                            "height": rec.height}
                if kind == "image":
                    geometry["path"] = rec.path
                color = rec.color or SHAPE_FILL
            elif kind == "label":
                geometry = {"x": x, "y": y}
                color = rec.color or TEXT_FILL
            elif kind == "line":
                x1, y1, x2, y2 = rec.raw_line
                geometry = {"x1": x + x1, "y1": y + y1,
                            "x2": x + x2, "y2": y + y2}
                color = rec.color or LINE_STROKE
            elif kind == "polygon":
                points = [[x + vx, y + vy]
                          for _, (vx, vy) in sorted(rec.vertices.items())]
                geometry = {"points": points}
                color = rec.color or SHAPE_FILL
            elif kind == "grid":
                geometry = {"x": x, "y": y, "rows": rec.rows, "cols": rec.cols,
                            "cell_width": rec.cell_w, "cell_height": rec.cell_h}
                color = rec.color or GRID_STROKE
            elif kind == "graph-node":
                geometry = {"x": x, "y": y, "radius": NODE_RADIUS}
                color = rec.color or NODE_FILL
            else:  # graph-edge
                ax, ay = origins[rec.ends[0]]
                bx, by = origins[rec.ends[1]]
                geometry = {"x1": ax, "y1": ay, "x2": bx, "y2": by,
                            "from": rec.ends[0], "to": rec.ends[1]}
                color = rec.color or LINE_STROKE

            parent = None
            if rec.cell is not None:
                parent = {"id": rec.cell[0], "row": rec.cell[1],
                          "col": rec.cell[2]}
            elif rec.graph is not None:
                parent = {"id": rec.graph}
            elements.append(SceneElement(
                id=rec.id, kind=kind, geometry=geometry, color=color,
                z=rec.z if rec.z is not None else _DEFAULT_Z.get(kind, 2),
                text=rec.text, parent=parent))

        elements.sort(key=lambda e: (e.z, e.id))
        width, height = _canvas(elements)
        return Scene(elements=elements, width=width, height=height)


def build_scene(vis_atoms) -> Scene:
    literals = _literal_list(vis_atoms)
    check_vis_literals(literals)
    return _Builder(literals).build()


def _extent(element: SceneElement) -> tuple:
    g = element.geometry
    kind = element.kind
    if kind in ("rect", "ellipse", "image"):
        return (g["x"], g["y"], g["x"] + g["width"], g["y"] + g["height"])
    if kind == "label":
        width = 7 * len(element.text or "") + 4
        return (g["x"], g["y"] - 12, g["x"] + width, g["y"] + 4)
    if kind == "line" or (kind == "graph-edge" and "x1" in g):
        return (min(g["x1"], g["x2"]), min(g["y1"], g["y2"]),
                max(g["x1"], g["x2"]), max(g["y1"], g["y2"]))
    if kind == "graph-edge":
        # hub: a pill box centred on (x, y)
        half_w = g["width"] / 2.0
        return (g["x"] - half_w, g["y"] - 10, g["x"] + half_w, g["y"] + 10)
    if kind == "polygon":
        xs = [p[0] for p in g["points"]]
        ys = [p[1] for p in g["points"]]
        return (min(xs), min(ys), max(xs), max(ys))
    if kind == "grid":
        return (g["x"], g["y"], g["x"] + g["cols"] * g["cell_width"],
                g["y"] + g["rows"] * g["cell_height"])
    # graph-node
    r = g["radius"]
    return (g["x"] - r, g["y"] - r, g["x"] + r, g["y"] + r)


def _canvas(elements: list[SceneElement]) -> tuple[float, float]:
    if not elements:
        return 120.0, 80.0
    max_x = max(_extent(e)[2] for e in elements)
    max_y = max(_extent(e)[3] for e in elements)
    return (round(max(max_x + MARGIN, 120.0), 2),
            round(max(max_y + MARGIN, 80.0), 2))


# ---------------------------------------------------------------------------
# generic hypergraph view

def _predicate_label(literal: GroundLiteral) -> str:
    return ("-" if literal.strong_negation else "") + literal.predicate


def generic_scene(interpretation) -> Scene:
    """Hypergraph drawing: nodes for individuals, a coloured hub per literal,
    numbered spokes from hub to argument nodes."""
    literals = _literal_list(interpretation)
    if not literals:
        return Scene()

    individuals = sorted({arg for lit in literals for arg in lit.args},
                         key=term_key)
    node_keys = ["n:" + pretty_print_term(t) for t in individuals]
    node_text = {key: pretty_print_term(t)
                 for key, t in zip(node_keys, individuals)}
    hub_keys = ["h:" + atom_text(lit) for lit in literals]

    predicates = sorted({(lit.predicate, lit.arity, lit.strong_negation)
                         for lit in literals})
    color_of = {p: PALETTE[i % len(PALETTE)] for i, p in enumerate(predicates)}

    keys = node_keys + hub_keys
    index = {key: i for i, key in enumerate(keys)}
    edges = []
    for lit, hub in zip(literals, hub_keys):
        for arg in lit.args:
            edges.append((index[hub], index["n:" + pretty_print_term(arg)]))
    positions = layout.spread(keys, edges)

    elements = []
    for key in node_keys:
        x, y = positions[key]
        elements.append(SceneElement(
            id=key, kind="graph-node",
            geometry={"x": x, "y": y, "radius": NODE_RADIUS},
            color=NODE_FILL, z=1, text=node_text[key]))
    for lit, hub in zip(literals, hub_keys):
        x, y = positions[hub]
        label = _predicate_label(lit)
        color = color_of[(lit.predicate, lit.arity, lit.strong_negation)]
        elements.append(SceneElement(
            id=hub, kind="graph-edge",
            geometry={"x": x, "y": y, "width": 7 * len(label) + 12,
                      "height": 20},
            color=color, z=2, text=label))
        for position, arg in enumerate(lit.args, start=1):
            node_key = "n:" + pretty_print_term(arg)
            nx, ny = positions[node_key]
            elements.append(SceneElement(
                id=f"c:{atom_text(lit)}:{position}", kind="line",
                geometry={"x1": x, "y1": y, "x2": nx, "y2": ny},
                color=color, z=0, text=str(position)))

    elements.sort(key=lambda e: (e.z, e.id))
    width, height = _canvas(elements)
    return Scene(elements=elements, width=width, height=height)

"""Reserved drawing vocabulary and its schema checks.

Any atom whose predicate starts with "vis" belongs to the renderer.  Each
predicate has a fixed arity and argument shape; a "vis" atom that matches no
schema is rejected loudly so a typo fails instead of silently not drawing.
"""

from __future__ import annotations

import re

from ..errors import VocabularyError
from ..model import (
    Constant,
    GroundLiteral,
    Interpretation,
    atom_key,
    atom_text,
    pretty_print_term,
)

VIS_PREFIX = "vis"

# Argument kind codes:
#   id     any ground term, names a scene element (or grid/graph container)
#   int    integer constant
#   text   constant (symbol, string, or integer); strings render unquoted
#   color  symbolic colour name, or a "#RRGGBB" string
SCHEMAS: dict[tuple[str, int], tuple[str, ...]] = {
    ("visrect", 3): ("id", "int", "int"),
    ("visellipse", 3): ("id", "int", "int"),
    ("visline", 5): ("id", "int", "int", "int", "int"),
    ("vispolygon", 4): ("id", "int", "int", "int"),
    ("vislabel", 2): ("id", "text"),
    ("visimage", 2): ("id", "text"),
    ("visposition", 3): ("id", "int", "int"),
    ("viscolor", 2): ("id", "color"),
    ("viszorder", 2): ("id", "int"),
    ("visgrid", 5): ("id", "int", "int", "int", "int"),
    ("visfillgrid", 4): ("id", "int", "int", "id"),
    ("visgraph", 1): ("id",),
    ("visnode", 2): ("id", "id"),
    ("visedge", 4): ("id", "id", "id", "id"),
}

# Predicates whose atoms create an element (vislabel is dual purpose: it
# attaches text to an existing element and creates a standalone label else).
ELEMENT_PREDICATES = frozenset(
    {"visrect", "visellipse", "visline", "vispolygon", "visimage",
     "visgrid", "visgraph", "visnode", "visedge"})
ATTRIBUTE_PREDICATES = frozenset(
    {"visposition", "viscolor", "viszorder", "visfillgrid"})

_HEX_COLOR = re.compile(r"^#[0-9A-Fa-f]{6}$")


def is_vis_literal(literal: GroundLiteral) -> bool:
    return literal.predicate.startswith(VIS_PREFIX)


def display_text(term) -> str:
    """Human text for labels and paths: strings lose their quotes."""
    if isinstance(term, Constant) and term.kind == "string":
        raw = str(term.value)[1:-1]
        return raw.replace('\\"', '"').replace("\\\\", "\\")
    return pretty_print_term(term)


def check_vis_literal(literal: GroundLiteral) -> None:
    if literal.strong_negation:
        raise VocabularyError(
            f"vocabulary atoms cannot be strongly negated: {atom_text(literal)}")
    schema = SCHEMAS.get((literal.predicate, literal.arity))
    if schema is None:
        raise VocabularyError(
            f"{literal.predicate}/{literal.arity} is not in the visualization "
            f"vocabulary: {atom_text(literal)}")
    for position, (arg, kind) in enumerate(zip(literal.args, schema), start=1):
        if kind == "id":
            continue
        if kind == "int":
            if isinstance(arg, Constant) and arg.kind == "int":
                continue
            raise VocabularyError(
                f"argument {position} of {atom_text(literal)} must be an integer")
        if kind == "text":
            if isinstance(arg, Constant):
                continue
            raise VocabularyError(
                f"argument {position} of {atom_text(literal)} must be a constant")
        if kind == "color":
            if isinstance(arg, Constant):
                if arg.kind == "symbol":
                    continue
                if arg.kind == "string" and _HEX_COLOR.match(display_text(arg)):
                    continue
            raise VocabularyError(
                f"argument {position} of {atom_text(literal)} must be a colour "
                f"name or a \"#RRGGBB\" string")


def check_vis_literals(literals) -> None:
    for literal in literals:
        check_vis_literal(literal)


def project_vis(interpretation) -> tuple[GroundLiteral, ...]:
    """The vis-vocabulary part of an answer set, schema checked and sorted."""
    if isinstance(interpretation, Interpretation):
        literals = interpretation.literals
    else:
        literals = interpretation
    picked = sorted((l for l in literals if is_vis_literal(l)), key=atom_key)
    check_vis_literals(picked)
    return tuple(picked)

"""Working with interpretations: tree views, fact files, diffs.

The tree is always depth 3 for nonempty input: a root marked "I", one "P"
node per (predicate, arity) pair, and one "L" node per literal. Strong
negation does not split predicates; the sign shows on the literal line.
"""

from __future__ import annotations

from dataclasses import dataclass

from .analysis import OutlineNode
from .model import (
    Dialect,
    GroundLiteral,
    Interpretation,
    atom_key,
    atom_text,
    pretty_print,
)
from .parsing import parse_interpretation


def to_tree(interpretation: Interpretation, label: str = "interpretation") -> OutlineNode:
    groups: dict[tuple[str, int], list[GroundLiteral]] = {}
    for lit in interpretation.literals:
        groups.setdefault((lit.predicate, lit.arity), []).append(lit)
    predicate_nodes = []
    for (name, arity) in sorted(groups):
        literals = sorted(groups[(name, arity)], key=atom_key)
        children = tuple(OutlineNode("L", atom_text(lit)) for lit in literals)
        predicate_nodes.append(OutlineNode("P", f"{name}/{arity}", children=children))
    return OutlineNode("I", label, children=tuple(predicate_nodes))


def to_facts(selection: Interpretation | GroundLiteral,
             dialect: Dialect | str = Dialect.GRINGO) -> str:
    """Facts in tree order, one per line, no trailing newline."""
    return pretty_print(selection, Dialect(dialect))


def from_facts(text: str, dialect: Dialect | str = Dialect.GRINGO) -> Interpretation:
    return parse_interpretation(text, dialect)


@dataclass(frozen=True)
class InterpretationDiff:
    only_left: tuple[GroundLiteral, ...]
    only_right: tuple[GroundLiteral, ...]
    common: tuple[GroundLiteral, ...]

    def to_dict(self) -> dict:
        return {
            "only_left": [atom_text(a) for a in self.only_left],
            "only_right": [atom_text(a) for a in self.only_right],
            "common": [atom_text(a) for a in self.common],
        }


def diff(left: Interpretation, right: Interpretation) -> InterpretationDiff:
    return InterpretationDiff(
        tuple(sorted(left.literals - right.literals, key=atom_key)),
        tuple(sorted(right.literals - left.literals, key=atom_key)),
        tuple(sorted(left.literals & right.literals, key=atom_key)),
    )

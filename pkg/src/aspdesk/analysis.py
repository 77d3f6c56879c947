"""Static analysis over parsed programs: outline, occurrences, safety, lints.

Safety here is total coverage: every variable of a rule must be bound by a
positive standard body literal outside any condition, where binding positions
exclude arithmetic and interval interiors (matching cannot invert them) and
builtin atoms never bind. Variables local to a conditional literal or an
aggregate element must instead be bound by that condition's own positive
literals. The anonymous variable is exempt.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (
    AggregateLiteral,
    BuiltinLiteral,
    Constant,
    Diagnostic,
    Program,
    Rule,
    SourceSpan,
    StandardLiteral,
    Term,
    Variable,
    pretty_print,
)
from .parsing import term_all_variables, term_binding_variables


def _clip(text: str, limit: int = 40) -> str:
    return text if len(text) <= limit else text[:limit - 3] + "..."


# ---------------------------------------------------------------------------
# outline

@dataclass(frozen=True)
class OutlineNode:
    kind: str
    label: str
    span: SourceSpan | None = field(compare=False, default=None)
    children: tuple["OutlineNode", ...] = ()

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "label": self.label,
            "span": self.span.to_dict() if self.span else None,
            "children": [c.to_dict() for c in self.children],
        }


def build_outline(program: Program, label: str = "program") -> OutlineNode:
    rule_nodes = []
    for rule in program.rules:
        head_children = tuple(
            OutlineNode("literal", _clip(pretty_print(h, program.dialect)), h.span)
            for h in rule.head)
        body_children = tuple(
            OutlineNode("literal", _clip(pretty_print(b, program.dialect)), b.span)
            for b in rule.body)
        parts = []
        if head_children:
            parts.append(OutlineNode("head", "head", _enclosing(head_children), head_children))
        if body_children:
            parts.append(OutlineNode("body", "body", _enclosing(body_children), body_children))
        rule_label = rule.name or _clip(_rule_text(rule, program))
        rule_nodes.append(OutlineNode("rule", rule_label, rule.span, tuple(parts)))
    return OutlineNode("program", label, None, tuple(rule_nodes))


def _rule_text(rule: Rule, program: Program) -> str:
    text = pretty_print(Rule(rule.head, rule.body), program.dialect)
    return " ".join(text.split())


def _enclosing(nodes) -> SourceSpan | None:
    spans = [n.span for n in nodes if n.span is not None]
    if not spans:
        return None
    first, last = spans[0], spans[-1]
    return SourceSpan(first.file, first.start_line, first.start_col,
                      last.end_line, last.end_col)


# ---------------------------------------------------------------------------
# occurrences

@dataclass(frozen=True)
class _Occurrence:
    kind: str  # predicate | variable | constant
    key: tuple
    span: SourceSpan


def _walk_terms(term: Term, rule_idx: int, out: list) -> None:
    if isinstance(term, Variable):
        if term.span is not None and not term.is_anonymous:
            out.append(_Occurrence("variable", (rule_idx, term.name), term.span))
        return
    if isinstance(term, Constant):
        if term.span is not None:
            out.append(_Occurrence("constant", (term.kind, term.value), term.span))
        return
    for child in getattr(term, "args", ()) or ():
        _walk_terms(child, rule_idx, out)
    for attr in ("left", "right", "low", "high"):
        child = getattr(term, attr, None)
        if isinstance(child, Term):
            _walk_terms(child, rule_idx, out)


def _walk_literal(lit, rule_idx: int, out: list) -> None:
    if isinstance(lit, StandardLiteral):
        if lit.predicate_span is not None:
            out.append(_Occurrence(
                "predicate", (lit.predicate, lit.arity, lit.strong_negation),
                lit.predicate_span))
        for arg in lit.args:
            _walk_terms(arg, rule_idx, out)
        for cond in lit.conditions:
            _walk_literal(cond, rule_idx, out)
    elif isinstance(lit, BuiltinLiteral):
        _walk_terms(lit.left, rule_idx, out)
        _walk_terms(lit.right, rule_idx, out)
    elif isinstance(lit, AggregateLiteral):
        for el in lit.elements:
            for t in el.terms:
                _walk_terms(t, rule_idx, out)
            for cond in el.conditions:
                _walk_literal(cond, rule_idx, out)
        for guard in (lit.lower_guard, lit.upper_guard):
            if guard:
                _walk_terms(guard[0], rule_idx, out)


def _all_occurrences(program: Program) -> list[_Occurrence]:
    out: list[_Occurrence] = []
    for idx, rule in enumerate(program.rules):
        for lit in (*rule.head, *rule.body):
            _walk_literal(lit, idx, out)
    return out


def occurrences_at(program: Program, line: int, col: int) -> list[SourceSpan]:
    """Spans of every occurrence of the symbol under the given position.

    Predicates and constants match document-wide, variables only within their
    rule. Empty when the position hits nothing nameable.
    """
    occurrences = _all_occurrences(program)
    hits = [o for o in occurrences if o.span.contains(line, col)]
    if not hits:
        return []
    def size(o: _Occurrence):
        return (o.span.end_line - o.span.start_line,
                o.span.end_col - o.span.start_col)
    chosen = min(hits, key=lambda o: (size(o), o.kind != "variable"))
    same = [o.span for o in occurrences if (o.kind, o.key) == (chosen.kind, chosen.key)]
    return sorted(same, key=lambda s: (s.start_line, s.start_col))


# ---------------------------------------------------------------------------
# variable collection per rule

def literal_variables(lit) -> set[str]:
    out: set[str] = set()
    if isinstance(lit, StandardLiteral):
        for arg in lit.args:
            out |= term_all_variables(arg)
        for cond in lit.conditions:
            out |= literal_variables(cond)
    elif isinstance(lit, BuiltinLiteral):
        out |= term_all_variables(lit.left) | term_all_variables(lit.right)
    elif isinstance(lit, AggregateLiteral):
        for el in lit.elements:
            for t in el.terms:
                out |= term_all_variables(t)
            for cond in el.conditions:
                out |= literal_variables(cond)
        for guard in (lit.lower_guard, lit.upper_guard):
            if guard:
                out |= term_all_variables(guard[0])
    return out


def rule_variables(rule: Rule) -> set[str]:
    out: set[str] = set()
    for lit in (*rule.head, *rule.body):
        out |= literal_variables(lit)
    return out


def _positive_cover(literals) -> set[str]:
    """Variables bound by the positive standard literals of a literal list."""
    bound: set[str] = set()
    for lit in literals:
        if (isinstance(lit, StandardLiteral) and not lit.default_negation
                and not lit.conditions):
            for arg in lit.args:
                bound |= term_binding_variables(arg)
    return bound


def check_safety(program: Program) -> list[Diagnostic]:
    diagnostics: list[Diagnostic] = []
    for rule in program.rules:
        unsafe = _unsafe_variables(rule)
        for name in sorted(unsafe):
            span = _first_variable_span(rule, name) or rule.span
            diagnostics.append(Diagnostic(
                "error", "unsafe-variable",
                f"variable {name} is not bound by a positive body literal", span))
    return diagnostics


def _unsafe_variables(rule: Rule) -> set[str]:
    global_bound = _positive_cover(rule.body)

    # Variables occurring outside conditions and aggregate elements need a
    # global binder; the rest is local to its context and must be bound there.
    outside: set[str] = set()
    contexts: list[tuple[set[str], set[str]]] = []  # (own vars, local cover)
    for lit in (*rule.head, *rule.body):
        if isinstance(lit, StandardLiteral):
            if lit.conditions:
                contexts.append((literal_variables(lit), _positive_cover(lit.conditions)))
            else:
                outside |= literal_variables(lit)
        elif isinstance(lit, BuiltinLiteral):
            outside |= literal_variables(lit)
        elif isinstance(lit, AggregateLiteral):
            for guard in (lit.lower_guard, lit.upper_guard):
                if guard:
                    outside |= term_all_variables(guard[0])
            for el in lit.elements:
                own: set[str] = set()
                for t in el.terms:
                    own |= term_all_variables(t)
                for cond in el.conditions:
                    own |= literal_variables(cond)
                contexts.append((own, _positive_cover(el.conditions)))

    unsafe = outside - global_bound
    for own, cover in contexts:
        shared = own & outside
        unsafe |= shared - global_bound
        unsafe |= (own - outside) - cover
    return {v for v in unsafe if v != "_"}


def _first_variable_span(rule: Rule, name: str) -> SourceSpan | None:
    occurrences: list[_Occurrence] = []
    for lit in (*rule.head, *rule.body):
        _walk_literal(lit, 0, occurrences)
    spans = [o.span for o in occurrences
             if o.kind == "variable" and o.key == (0, name)]
    if not spans:
        return None
    return min(spans, key=lambda s: (s.start_line, s.start_col))


def check_assignments(program: Program) -> list[Diagnostic]:
    """Warn when an assignment's left side is a constant: assignments write
    right to left, so 'a :- 3 = X.' stores into 3, which is almost never meant."""
    diagnostics: list[Diagnostic] = []
    for rule in program.rules:
        for lit in rule.body:
            if (isinstance(lit, BuiltinLiteral) and lit.is_assignment
                    and isinstance(lit.left, Constant)):
                diagnostics.append(Diagnostic(
                    "warning", "const-assignment-lhs",
                    "assignment writes its right side into its left side, "
                    "but the left side is a constant", lit.span))
    return diagnostics


def lint(program: Program) -> list[Diagnostic]:
    return check_safety(program) + check_assignments(program)

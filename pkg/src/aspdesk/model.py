"""Dialect-aware program model for answer-set programs.

Values are immutable dataclasses. Source spans never participate in equality,
so `==` is structural equality: two elements parsed from different positions
(or printed and reparsed) compare equal when they denote the same construct.

A rule is head literals, positive body and negated body; facts are rules with
a single head atom and empty body, constraints have an empty head. Default
negation ("not") and strong negation ("-") are distinct flags. Gringo-style
conditional literals keep their condition list; DLV programs must not carry
conditions (enforced at Program construction).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from .errors import ConsistencyError, ModelError, NonGroundError, UnsupportedConstructError


class Dialect(str, Enum):
    GRINGO = "gringo"
    DLV = "dlv"


COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")
ARITHMETIC_OPS = ("+", "-", "*", "/")
AGGREGATE_FUNCTIONS = ("count", "sum", "min", "max")


@dataclass(frozen=True)
class SourceSpan:
    """1-based line/column range; end column is exclusive."""

    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self):
        if (self.start_line, self.start_col) > (self.end_line, self.end_col):
            raise ModelError("span start must not follow its end")

    def contains(self, line: int, col: int) -> bool:
        return (self.start_line, self.start_col) <= (line, col) < (self.end_line, self.end_col)

    def contains_span(self, other: "SourceSpan") -> bool:
        return ((self.start_line, self.start_col) <= (other.start_line, other.start_col)
                and (other.end_line, other.end_col) <= (self.end_line, self.end_col))

    def extract(self, source: str) -> str:
        lines = source.split("\n")
        if self.start_line == self.end_line:
            return lines[self.start_line - 1][self.start_col - 1:self.end_col - 1]
        parts = [lines[self.start_line - 1][self.start_col - 1:]]
        parts.extend(lines[self.start_line:self.end_line - 1])
        parts.append(lines[self.end_line - 1][:self.end_col - 1])
        return "\n".join(parts)

    def to_dict(self) -> dict:
        return {
            "file": self.file,
            "start_line": self.start_line,
            "start_col": self.start_col,
            "end_line": self.end_line,
            "end_col": self.end_col,
        }


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # error | warning | info
    code: str
    message: str
    span: SourceSpan

    def to_dict(self) -> dict:
        return {
            "severity": self.severity,
            "code": self.code,
            "message": self.message,
            "span": self.span.to_dict(),
        }


class Term:
    """Base class for terms; concrete variants below."""

    __slots__ = ()


@dataclass(frozen=True)
class Constant(Term):
    value: int | str
    kind: str = ""  # int | symbol | string, derived from value when omitted
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.kind:
            if isinstance(self.value, int):
                derived = "int"
            elif isinstance(self.value, str) and self.value.startswith('"'):
                derived = "string"
            else:
                derived = "symbol"
            object.__setattr__(self, "kind", derived)
        if self.kind == "int" and not isinstance(self.value, int):
            raise ModelError(f"integer constant with non-int value {self.value!r}")


@dataclass(frozen=True)
class Variable(Term):
    name: str
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    @property
    def is_anonymous(self) -> bool:
        return self.name == "_"


@dataclass(frozen=True)
class Function(Term):
    name: str
    args: tuple[Term, ...]
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ModelError(f"function term {self.name!r} requires at least one argument")


@dataclass(frozen=True)
class Arithmetic(Term):
    op: str
    left: Term
    right: Term
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.op not in ARITHMETIC_OPS:
            raise ModelError(f"unknown arithmetic operator {self.op!r}")


@dataclass(frozen=True)
class Interval(Term):
    low: Term
    high: Term
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class StandardLiteral:
    predicate: str
    args: tuple[Term, ...] = ()
    strong_negation: bool = False
    default_negation: bool = False
    conditions: tuple["StandardLiteral", ...] = ()
    span: SourceSpan | None = field(default=None, compare=False, repr=False)
    predicate_span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        object.__setattr__(self, "conditions", tuple(self.conditions))

    @property
    def arity(self) -> int:
        return len(self.args)


@dataclass(frozen=True)
class BuiltinLiteral:
    op: str
    left: Term
    right: Term
    is_assignment: bool = False
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.op not in COMPARISON_OPS:
            raise ModelError(f"unknown comparison operator {self.op!r}")


@dataclass(frozen=True)
class AggregateElement:
    terms: tuple[Term, ...] = ()
    conditions: tuple[object, ...] = ()  # StandardLiteral | BuiltinLiteral

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "conditions", tuple(self.conditions))


@dataclass(frozen=True)
class AggregateLiteral:
    function: str
    elements: tuple[AggregateElement, ...]
    lower_guard: tuple[Term, str] | None = None  # guard term REL aggregate
    upper_guard: tuple[Term, str] | None = None  # aggregate REL guard term
    dialect: Dialect = Dialect.GRINGO
    default_negation: bool = False
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if self.function not in AGGREGATE_FUNCTIONS:
            raise ModelError(f"unknown aggregate function {self.function!r}")
        for guard in (self.lower_guard, self.upper_guard):
            if guard is not None and guard[1] not in COMPARISON_OPS:
                raise ModelError(f"unknown guard operator {guard[1]!r}")


BodyLiteral = (StandardLiteral, BuiltinLiteral, AggregateLiteral)


@dataclass(frozen=True)
class Comment:
    text: str
    kind: str = "line"  # line | block
    span: SourceSpan | None = field(default=None, compare=False, repr=False)
    attached_to: int | None = field(default=None, compare=False)  # rule index


@dataclass(frozen=True)
class MetaCommand:
    kind: str
    argument: str
    target: int | None = None  # rule index
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Rule:
    head: tuple[StandardLiteral, ...] = ()
    body: tuple[object, ...] = ()
    name: str | None = None
    comments: tuple[Comment, ...] = ()
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(self.head))
        object.__setattr__(self, "body", tuple(self.body))
        object.__setattr__(self, "comments", tuple(self.comments))

    @property
    def is_fact(self) -> bool:
        return len(self.head) == 1 and not self.body

    @property
    def is_constraint(self) -> bool:
        return not self.head and bool(self.body)


@dataclass(frozen=True)
class Program:
    dialect: Dialect
    rules: tuple[Rule, ...] = ()
    standalone_comments: tuple[Comment, ...] = ()
    meta_commands: tuple[MetaCommand, ...] = field(default=(), compare=False)
    source: str = field(default="", compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "standalone_comments", tuple(self.standalone_comments))
        object.__setattr__(self, "meta_commands", tuple(self.meta_commands))
        if self.dialect == Dialect.DLV:
            for rule in self.rules:
                for lit in rule.body:
                    if isinstance(lit, StandardLiteral) and lit.conditions:
                        raise ModelError("conditional literals are not part of the DLV dialect")


@dataclass(frozen=True)
class GroundLiteral:
    predicate: str
    args: tuple[Term, ...] = ()
    strong_negation: bool = False

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        for arg in self.args:
            _require_ground(arg)

    @property
    def arity(self) -> int:
        return len(self.args)

    def complement(self) -> "GroundLiteral":
        return GroundLiteral(self.predicate, self.args, not self.strong_negation)


def _require_ground(term: Term) -> None:
    if isinstance(term, Constant):
        return
    if isinstance(term, Function):
        for arg in term.args:
            _require_ground(arg)
        return
    raise NonGroundError(f"term {pretty_print_term(term)!r} is not ground")


@dataclass(frozen=True)
class Interpretation:
    literals: frozenset[GroundLiteral] = frozenset()
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "literals", frozenset(self.literals))
        for lit in self.literals:
            if lit.complement() in self.literals:
                raise ConsistencyError(
                    f"interpretation contains both {atom_text(lit)} and its strong complement")

    def sorted_literals(self) -> list[GroundLiteral]:
        return sorted(self.literals, key=atom_key)

    def with_literal(self, literal: GroundLiteral) -> "Interpretation":
        """Insert a literal; fails (removing nothing) if consistency would break."""
        if literal.complement() in self.literals:
            raise ConsistencyError(
                f"cannot add {atom_text(literal)}: strong complement already present")
        return Interpretation(self.literals | {literal}, label=self.label)

    def without_literal(self, literal: GroundLiteral) -> "Interpretation":
        return Interpretation(self.literals - {literal}, label=self.label)

    def __contains__(self, literal: GroundLiteral) -> bool:
        return literal in self.literals

    def __len__(self) -> int:
        return len(self.literals)


# ---------------------------------------------------------------------------
# deterministic ordering

def term_key(term: Term):
    """Total order over ground terms: integers, then symbols/strings, then functions."""
    if isinstance(term, Constant):
        if term.kind == "int":
            return (0, "", term.value, ())
        return (1, str(term.value), 0, ())
    if isinstance(term, Function):
        return (2, term.name, len(term.args), tuple(term_key(a) for a in term.args))
    raise ModelError(f"term {term!r} has no ground ordering")


def atom_key(literal: GroundLiteral):
    return (literal.predicate, literal.arity,
            tuple(term_key(a) for a in literal.args), literal.strong_negation)


# ---------------------------------------------------------------------------
# printing

def pretty_print_term(term: Term) -> str:
    return _print_term(term, 0)


def _print_term(term: Term, parent_prec: int) -> str:
    if isinstance(term, Constant):
        return str(term.value)
    if isinstance(term, Variable):
        return term.name
    if isinstance(term, Function):
        return f"{term.name}({','.join(_print_term(a, 0) for a in term.args)})"
    if isinstance(term, Arithmetic):
        if (term.op == "-" and isinstance(term.left, Constant)
                and term.left.kind == "int" and term.left.value == 0):
            inner = _print_term(term.right, 3)
            return f"-{inner}"
        prec = 1 if term.op in "+-" else 2
        left = _print_term(term.left, prec)
        right = _print_term(term.right, prec + 1)  # -, / are left associative
        text = f"{left}{term.op}{right}"
        return f"({text})" if prec < parent_prec else text
    if isinstance(term, Interval):
        return f"{_print_term(term.low, 1)}..{_print_term(term.high, 1)}"
    raise ModelError(f"cannot print term {term!r}")


def atom_text(literal: GroundLiteral) -> str:
    """Bare literal text without a terminating dot."""
    sign = "-" if literal.strong_negation else ""
    if not literal.args:
        return f"{sign}{literal.predicate}"
    args = ",".join(pretty_print_term(a) for a in literal.args)
    return f"{sign}{literal.predicate}({args})"


def _print_standard(lit: StandardLiteral, dialect: Dialect) -> str:
    sign = "-" if lit.strong_negation else ""
    naf = "not " if lit.default_negation else ""
    if lit.args:
        args = ",".join(_print_term(a, 0) for a in lit.args)
        base = f"{naf}{sign}{lit.predicate}({args})"
    else:
        base = f"{naf}{sign}{lit.predicate}"
    if lit.conditions:
        if dialect == Dialect.DLV:
            raise UnsupportedConstructError("DLV has no conditional literals")
        conds = " : ".join(_print_standard(c, dialect) for c in lit.conditions)
        return f"{base} : {conds}"
    return base


def _print_builtin(lit: BuiltinLiteral) -> str:
    return f"{_print_term(lit.left, 0)} {lit.op} {_print_term(lit.right, 0)}"


def _print_condition(cond, dialect: Dialect) -> str:
    if isinstance(cond, BuiltinLiteral):
        return _print_builtin(cond)
    return _print_standard(cond, dialect)


def _print_aggregate(lit: AggregateLiteral, dialect: Dialect) -> str:
    if lit.dialect != dialect:
        raise UnsupportedConstructError(
            f"aggregate written for {lit.dialect.value} cannot be printed as {dialect.value}")
    naf = "not " if lit.default_negation else ""
    if dialect == Dialect.GRINGO:
        parts = []
        for el in lit.elements:
            bits = [_print_term(t, 0) for t in el.terms]
            bits.extend(_print_condition(c, dialect) for c in el.conditions)
            parts.append(" : ".join(bits))
        body = f"#{lit.function}{{{', '.join(parts)}}}"
        low = high = ""
        if lit.lower_guard:  # "<=" is the implicit guard form
            term, op = lit.lower_guard
            low = f"{_print_term(term, 0)} " if op == "<=" else f"{_print_term(term, 0)} {op} "
        if lit.upper_guard:
            term, op = lit.upper_guard
            high = f" {_print_term(term, 0)}" if op == "<=" else f" {op} {_print_term(term, 0)}"
        return f"{naf}{low}{body}{high}"
    parts = []
    for el in lit.elements:
        terms = ",".join(_print_term(t, 0) for t in el.terms)
        conds = ", ".join(_print_condition(c, dialect) for c in el.conditions)
        parts.append(f"{terms} : {conds}" if conds else terms)
    body = f"#{lit.function}{{{'; '.join(parts)}}}"
    low = ""
    if lit.lower_guard:
        low = f"{_print_term(lit.lower_guard[0], 0)} {lit.lower_guard[1]} "
    high = ""
    if lit.upper_guard:
        high = f" {lit.upper_guard[1]} {_print_term(lit.upper_guard[0], 0)}"
    return f"{naf}{low}{body}{high}"


def _print_body_literal(lit, dialect: Dialect) -> str:
    if isinstance(lit, StandardLiteral):
        return _print_standard(lit, dialect)
    if isinstance(lit, BuiltinLiteral):
        return _print_builtin(lit)
    if isinstance(lit, AggregateLiteral):
        return _print_aggregate(lit, dialect)
    raise ModelError(f"cannot print body literal {lit!r}")


def _print_rule_text(rule: Rule, dialect: Dialect) -> str:
    sep = " | " if dialect == Dialect.GRINGO else " v "
    head = sep.join(_print_standard(h, dialect) for h in rule.head)
    body = ", ".join(_print_body_literal(b, dialect) for b in rule.body)
    if rule.head and rule.body:
        return f"{head} :- {body}."
    if rule.head:
        return f"{head}."
    return f":- {body}."


def _print_rule(rule: Rule, dialect: Dialect) -> str:
    lines = [c.text for c in rule.comments]
    if rule.name:
        lines.append(f"%! name({rule.name})")
    lines.append(_print_rule_text(rule, dialect))
    return "\n".join(lines)


def pretty_print(element, dialect: Dialect | None = None) -> str:
    """Render an element in the given dialect; reparsing yields an equal element.

    When no dialect is given, programs use their own and everything else
    defaults to Gringo (the forms only differ for rules and aggregates).
    """
    if dialect is None:
        dialect = element.dialect if isinstance(element, Program) else Dialect.GRINGO
    dialect = Dialect(dialect)
    if isinstance(element, Program):
        chunks = [_print_rule(r, dialect) for r in element.rules]
        chunks.extend(c.text for c in element.standalone_comments)
        return "\n".join(chunks)
    if isinstance(element, Rule):
        return _print_rule(element, dialect)
    if isinstance(element, Interpretation):
        return "\n".join(atom_text(lit) + "." for lit in element.sorted_literals())
    if isinstance(element, GroundLiteral):
        return atom_text(element) + "."
    if isinstance(element, StandardLiteral):
        return _print_standard(element, dialect)
    if isinstance(element, BuiltinLiteral):
        return _print_builtin(element)
    if isinstance(element, AggregateLiteral):
        return _print_aggregate(element, dialect)
    if isinstance(element, Comment):
        return element.text
    if isinstance(element, MetaCommand):
        return f"%! {element.kind}({element.argument})"
    if isinstance(element, Term):
        return _print_term(element, 0)
    raise ModelError(f"cannot print {type(element).__name__}")


# ---------------------------------------------------------------------------
# herbrand constants

def herbrand_constants(program: Program) -> set[Constant]:
    """All constants of the program; integer intervals contribute their expansion."""
    found: set[Constant] = set()
    for rule in program.rules:
        for lit in rule.head:
            _collect_literal(lit, found)
        for lit in rule.body:
            _collect_body_literal(lit, found)
    return found


def _collect_body_literal(lit, found: set) -> None:
    if isinstance(lit, StandardLiteral):
        _collect_literal(lit, found)
    elif isinstance(lit, BuiltinLiteral):
        _collect_term(lit.left, found)
        _collect_term(lit.right, found)
    elif isinstance(lit, AggregateLiteral):
        for el in lit.elements:
            for t in el.terms:
                _collect_term(t, found)
            for c in el.conditions:
                _collect_body_literal(c, found)
        for guard in (lit.lower_guard, lit.upper_guard):
            if guard:
                _collect_term(guard[0], found)


def _collect_literal(lit: StandardLiteral, found: set) -> None:
    for arg in lit.args:
        _collect_term(arg, found)
    for cond in lit.conditions:
        _collect_literal(cond, found)


def _collect_term(term: Term, found: set) -> None:
    if isinstance(term, Constant):
        found.add(Constant(term.value, term.kind))
    elif isinstance(term, Function):
        for arg in term.args:
            _collect_term(arg, found)
    elif isinstance(term, Arithmetic):
        _collect_term(term.left, found)
        _collect_term(term.right, found)
    elif isinstance(term, Interval):
        if (isinstance(term.low, Constant) and term.low.kind == "int"
                and isinstance(term.high, Constant) and term.high.kind == "int"):
            for value in range(term.low.value, term.high.value + 1):
                found.add(Constant(value))
        else:
            _collect_term(term.low, found)
            _collect_term(term.high, found)


# ---------------------------------------------------------------------------
# conversions

def standard_from_ground(literal: GroundLiteral) -> StandardLiteral:
    return StandardLiteral(literal.predicate, literal.args,
                           strong_negation=literal.strong_negation)


def fact_rule(literal: GroundLiteral) -> Rule:
    return Rule(head=(standard_from_ground(literal),))


def strip_spans(term: Term) -> Term:
    """Copy of a term without source positions (useful for synthesized programs)."""
    if isinstance(term, Constant):
        return Constant(term.value, term.kind)
    if isinstance(term, Variable):
        return Variable(term.name)
    if isinstance(term, Function):
        return Function(term.name, tuple(strip_spans(a) for a in term.args))
    if isinstance(term, Arithmetic):
        return Arithmetic(term.op, strip_spans(term.left), strip_spans(term.right))
    if isinstance(term, Interval):
        return Interval(strip_spans(term.low), strip_spans(term.high))
    return term

"""Error-tolerant parsing for the Gringo and DLV dialects.

The parser never raises on malformed input: unparseable segments are skipped
to the next '.' terminator (string literals and comments are masked during
lexing, so dots inside them never trigger recovery) and reported as a single
error diagnostic each. Constructs the engine cannot evaluate still parse here;
rejection happens later with dedicated codes.

Comment attachment follows a neighbourhood rule: a comment embedded in or
trailing a rule on the same line belongs to that rule; otherwise it belongs to
the rule starting on the next non-comment line when at most one blank line
separates them; otherwise it is standalone. Meta commands ("%!" line form,
"%*! ... *%" block form) are lexed apart from ordinary comments and name the
next rule; they are not counted as comments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ConsistencyError, FormatError, UnknownDialectError
from .model import (
    AggregateElement,
    AggregateLiteral,
    Arithmetic,
    BuiltinLiteral,
    Comment,
    Constant,
    Diagnostic,
    Dialect,
    Function,
    GroundLiteral,
    Interpretation,
    Interval,
    MetaCommand,
    Program,
    Rule,
    SourceSpan,
    StandardLiteral,
    Term,
    Variable,
)

_EXTENSION_DIALECTS = {
    ".lp": Dialect.GRINGO,
    ".lparse": Dialect.GRINGO,
    ".gr": Dialect.GRINGO,
    ".gringo": Dialect.GRINGO,
    ".dlv": Dialect.DLV,
    ".dl": Dialect.DLV,
}

_RELOPS = {"EQ": "=", "NEQ": "!=", "LT": "<", "LE": "<=", "GT": ">", "GE": ">="}
_AGGREGATE_WORDS = {"#count": "count", "#sum": "sum", "#min": "min", "#max": "max"}


def detect_dialect(path: str | Path) -> Dialect:
    suffix = Path(path).suffix.lower()
    try:
        return _EXTENSION_DIALECTS[suffix]
    except KeyError:
        raise UnknownDialectError(
            f"cannot infer a dialect from {str(path)!r}; known extensions: "
            + ", ".join(sorted(_EXTENSION_DIALECTS))) from None


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int
    end_line: int
    end_col: int
    problem: str | None = None

    def span(self, file: str) -> SourceSpan:
        return SourceSpan(file, self.line, self.col, self.end_line, self.end_col)


@dataclass
class _RawComment:
    text: str
    kind: str  # line | block
    span: SourceSpan
    is_meta: bool


_SYMBOL_KINDS = {
    ".": "DOT", ",": "COMMA", ";": "SEMI", ":": "COLON", "(": "LPAREN",
    ")": "RPAREN", "{": "LBRACE", "}": "RBRACE", "[": "LBRACKET",
    "]": "RBRACKET", "|": "PIPE", "+": "PLUS", "-": "MINUS", "*": "STAR",
    "/": "SLASH", "=": "EQ", "<": "LT", ">": "GT",
}
_DOUBLE_KINDS = {
    ":-": "IF", ":~": "WIF", "..": "DOTDOT", "!=": "NEQ", "<=": "LE",
    ">=": "GE", "==": "EQ", "<>": "NEQ",
}


class Lexer:
    def __init__(self, source: str, file: str):
        self.source = source
        self.file = file
        self.tokens: list[Token] = []
        self.comments: list[_RawComment] = []
        self.diagnostics: list[Diagnostic] = []

    def run(self):
        src = self.source
        i, line, col = 0, 1, 1
        n = len(src)
        while i < n:
            c = src[i]
            if c in " \t\r":
                i += 1
                col += 1
                continue
            if c == "\n":
                i += 1
                line += 1
                col = 1
                continue
            if c == "%":
                i, line, col = self._lex_comment(i, line, col)
                continue
            if c.isdigit():
                j = i
                while j < n and src[j].isdigit():
                    j += 1
                self._emit("INT", src[i:j], line, col)
                col += j - i
                i = j
                continue
            if c.isalpha() or c == "_":
                j = i
                while j < n and (src[j].isalnum() or src[j] == "_"):
                    j += 1
                text = src[i:j]
                kind = "VAR" if (c == "_" or c.isupper()) else "IDENT"
                self._emit(kind, text, line, col)
                col += j - i
                i = j
                continue
            if c == '"':
                i, line, col = self._lex_string(i, line, col)
                continue
            if c == "#":
                j = i + 1
                while j < n and (src[j].isalnum() or src[j] == "_"):
                    j += 1
                self._emit("HASH", src[i:j], line, col)
                col += j - i
                i = j
                continue
            two = src[i:i + 2]
            if two in _DOUBLE_KINDS:
                self._emit(_DOUBLE_KINDS[two], two, line, col)
                i += 2
                col += 2
                continue
            if c in _SYMBOL_KINDS:
                self._emit(_SYMBOL_KINDS[c], c, line, col)
                i += 1
                col += 1
                continue
            self._emit("UNKNOWN", c, line, col, problem=f"unexpected character {c!r}")
            i += 1
            col += 1
        self.tokens.append(Token("EOF", "", line, col, line, col))
        return self.tokens, self.comments, self.diagnostics

    def _emit(self, kind, text, line, col, problem=None):
        self.tokens.append(Token(kind, text, line, col, line, col + len(text), problem))

    def _lex_comment(self, i, line, col):
        src = self.source
        n = len(src)
        start_line, start_col = line, col
        if src.startswith("%*", i):
            is_meta = src.startswith("%*!", i)
            j = src.find("*%", i + 2)
            if j < 0:
                text = src[i:]
                end = n
            else:
                end = j + 2
                text = src[i:end]
            nl = text.count("\n")
            end_line = line + nl
            end_col = (col + len(text)) if nl == 0 else (len(text) - text.rfind("\n"))
            span = SourceSpan(self.file, start_line, start_col, end_line, end_col)
            if j < 0:
                self.diagnostics.append(Diagnostic(
                    "warning", "unterminated-comment", "block comment is never closed", span))
            self.comments.append(_RawComment(text, "block", span, is_meta))
            return end, end_line, end_col
        j = src.find("\n", i)
        if j < 0:
            j = n
        text = src[i:j]
        is_meta = text.startswith("%!")
        span = SourceSpan(self.file, start_line, start_col, line, col + len(text))
        self.comments.append(_RawComment(text, "line", span, is_meta))
        return j, line, col + len(text)

    def _lex_string(self, i, line, col):
        src = self.source
        n = len(src)
        j = i + 1
        while j < n and src[j] not in '"\n':
            j += 2 if src[j] == "\\" else 1
        if j < n and src[j] == '"':
            text = src[i:j + 1]
            self._emit("STRING", text, line, col)
            return j + 1, line, col + len(text)
        text = src[i:j]
        self._emit("STRING", text, line, col, problem="string literal is never closed")
        return j, line, col + len(text)


class _ParseFailure(Exception):
    def __init__(self, message: str, token: Token):
        super().__init__(message)
        self.token = token


@dataclass
class ParseResult:
    program: Program
    diagnostics: list[Diagnostic]

    @property
    def has_errors(self) -> bool:
        return any(d.severity == "error" for d in self.diagnostics)


class _Parser:
    def __init__(self, tokens: list[Token], dialect: Dialect, source: str, file: str):
        self.tokens = tokens
        self.dialect = dialect
        self.source = source
        self.file = file
        self.pos = 0
        self.diagnostics: list[Diagnostic] = []

    # token helpers -------------------------------------------------------

    def tok(self, ahead: int = 0) -> Token:
        idx = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[idx]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if self.pos < len(self.tokens) - 1:
            self.pos += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.tok()
        if t.kind != kind:
            raise _ParseFailure(f"expected {kind} but found {t.text or 'end of input'!r}", t)
        if t.problem:
            raise _ParseFailure(t.problem, t)
        return self.advance()

    def span_between(self, start: Token, end: Token) -> SourceSpan:
        return SourceSpan(self.file, start.line, start.col, end.end_line, end.end_col)

    def diag(self, severity, code, message, span):
        self.diagnostics.append(Diagnostic(severity, code, message, span))

    # program -------------------------------------------------------------

    def parse_program(self) -> list[Rule]:
        rules: list[Rule] = []
        while self.tok().kind != "EOF":
            start = self.tok()
            try:
                rule = self._parse_statement()
                if rule is not None:
                    rules.append(rule)
            except _ParseFailure as failure:
                end = self._recover()
                self.diag("error", "parse-error", str(failure),
                          self.span_between(start, end))
        return rules

    def _recover(self) -> Token:
        """Skip to just past the next '.'; dots in strings/comments are already masked."""
        last = self.tok()
        while self.tok().kind != "EOF":
            t = self.advance()
            last = t
            if t.kind == "DOT":
                break
        return last

    def _skip_statement(self) -> Token:
        last = self._recover()
        if self.tok().kind == "LBRACKET":  # weak-constraint weight annotation
            while self.tok().kind != "EOF":
                t = self.advance()
                last = t
                if t.kind == "RBRACKET":
                    break
        return last

    def _parse_statement(self) -> Rule | None:
        t = self.tok()
        if t.kind == "HASH":
            return self._parse_directive()
        if t.kind == "WIF":
            start = self.advance()
            end = self._skip_statement()
            self.diag("warning", "directive-skipped",
                      "optimisation statement skipped (handled by external solvers)",
                      self.span_between(start, end))
            return None
        if self._looks_like_choice_head():
            start = t
            end = self._skip_statement()
            self.diag("warning", "unsupported-construct",
                      "choice rule skipped (handled by external solvers)",
                      self.span_between(start, end))
            return None
        return self._parse_rule()

    def _parse_directive(self) -> None:
        start = self.advance()
        end = self._skip_statement()
        span = self.span_between(start, end)
        if start.text == "#const":
            self.diag("info", "directive-skipped", "#const definition skipped", span)
        elif start.text in ("#minimize", "#maximize"):
            self.diag("warning", "directive-skipped",
                      "optimisation statement skipped (handled by external solvers)", span)
        elif start.text in ("#show", "#hide"):
            self.diag("warning", "directive-skipped",
                      f"filtering directive {start.text} skipped", span)
        else:
            self.diag("warning", "directive-skipped",
                      f"directive {start.text} skipped", span)
        return None

    def _looks_like_choice_head(self) -> bool:
        """Braces before ':-'/'.' at depth 0 mean a choice head, which we skip."""
        depth = 0
        i = self.pos
        while i < len(self.tokens):
            k = self.tokens[i].kind
            if k in ("EOF", "DOT") or (k == "IF" and depth == 0):
                return False
            if k == "HASH":  # head aggregates keep their braces behind the hash word
                return False
            if k == "LBRACE" and depth == 0:
                return True
            if k in ("LPAREN", "LBRACKET"):
                depth += 1
            elif k in ("RPAREN", "RBRACKET"):
                depth -= 1
            i += 1
        return False

    # rules ---------------------------------------------------------------

    def _parse_rule(self) -> Rule:
        start = self.tok()
        head: list[StandardLiteral] = []
        if self.tok().kind != "IF":
            head.append(self._parse_head_literal())
            while self._at_disjunction():
                self.advance()
                head.append(self._parse_head_literal())
        body: list = []
        if self.tok().kind == "IF":
            self.advance()
            body.append(self._parse_body_literal())
            while self.tok().kind == "COMMA":
                self.advance()
                body.append(self._parse_body_literal())
        if self.tok().kind == "DOT":
            end = self.advance()
        elif self.tok().kind == "EOF":
            end = self.tokens[self.pos - 1] if self.pos else self.tok()
            self.diag("error", "missing-dot", "rule is missing its terminating '.'",
                      self.span_between(start, end))
        else:
            raise _ParseFailure(
                f"expected '.' but found {self.tok().text!r}", self.tok())
        body = self._mark_assignments(body)
        return Rule(head=tuple(head), body=tuple(body),
                    span=self.span_between(start, end))

    def _at_disjunction(self) -> bool:
        t = self.tok()
        if self.dialect == Dialect.GRINGO:
            return t.kind in ("PIPE", "SEMI")
        return t.kind == "IDENT" and t.text == "v"

    def _parse_head_literal(self) -> StandardLiteral:
        t = self.tok()
        if t.kind == "IDENT" and t.text == "not":
            raise _ParseFailure("default negation cannot appear in a rule head", t)
        lit = self._parse_standard_literal(default_negation=False)
        if self.dialect == Dialect.GRINGO and self.tok().kind == "COLON":
            lit = self._attach_conditions(lit)
        return lit

    # body literals -------------------------------------------------------

    def _parse_body_literal(self):
        naf = False
        start = self.tok()
        if start.kind == "IDENT" and start.text == "not":
            self.advance()
            naf = True
        t = self.tok()
        if t.kind == "HASH" or (t.kind == "LBRACE" and self.dialect == Dialect.GRINGO):
            return self._parse_aggregate(None, naf, start)
        if t.kind == "MINUS" and self.tok(1).kind == "IDENT":
            save = self.pos
            self.advance()
            lit = self._parse_standard_literal(default_negation=naf, strong=True,
                                               start_token=start)
            if self.tok().kind in _RELOPS:
                self.pos = save  # it was a term after all
            else:
                if self.dialect == Dialect.GRINGO and self.tok().kind == "COLON":
                    lit = self._attach_conditions(lit)
                return lit
        if t.kind == "IDENT":
            save = self.pos
            lit = self._parse_standard_literal(default_negation=naf, start_token=start)
            nxt = self.tok().kind
            if nxt in _RELOPS or nxt == "HASH" or (
                    nxt == "LBRACE" and self.dialect == Dialect.GRINGO):
                self.pos = save
            else:
                if self.dialect == Dialect.GRINGO and self.tok().kind == "COLON":
                    lit = self._attach_conditions(lit)
                elif self.tok().kind == "COLON":
                    raise _ParseFailure(
                        "conditional literals require the Gringo dialect", self.tok())
                return lit
        left = self._parse_term()
        t = self.tok()
        if t.kind in _RELOPS:
            op = _RELOPS[t.kind]
            self.advance()
            if self.tok().kind == "HASH" or (
                    self.tok().kind == "LBRACE" and self.dialect == Dialect.GRINGO):
                return self._parse_aggregate((left, op), naf, start)
            if naf:
                raise _ParseFailure(
                    "default negation cannot be applied to a comparison", start)
            right = self._parse_term()
            end = self.tokens[self.pos - 1]
            return BuiltinLiteral(op, left, right, span=self.span_between(start, end))
        if t.kind == "HASH" or (t.kind == "LBRACE" and self.dialect == Dialect.GRINGO):
            return self._parse_aggregate((left, "<="), naf, start)
        raise _ParseFailure(f"expected a literal but found {t.text or 'end of input'!r}", t)

    def _attach_conditions(self, lit: StandardLiteral) -> StandardLiteral:
        conditions = []
        while self.tok().kind == "COLON":
            self.advance()
            conditions.append(self._parse_condition_literal())
        end = self.tokens[self.pos - 1]
        span = SourceSpan(self.file, lit.span.start_line, lit.span.start_col,
                          end.end_line, end.end_col)
        return replace(lit, conditions=tuple(conditions), span=span)

    def _parse_condition_literal(self) -> StandardLiteral:
        start = self.tok()
        naf = False
        if start.kind == "IDENT" and start.text == "not":
            self.advance()
            naf = True
        strong = False
        if self.tok().kind == "MINUS":
            self.advance()
            strong = True
        return self._parse_standard_literal(default_negation=naf, strong=strong,
                                            start_token=start)

    def _parse_standard_literal(self, *, default_negation=False, strong=False,
                                start_token: Token | None = None) -> StandardLiteral:
        if not strong and self.tok().kind == "MINUS":
            self.advance()
            strong = True
        name_tok = self.expect("IDENT")
        start = start_token or name_tok
        args: list = []
        end = name_tok
        if self.tok().kind == "LPAREN":
            self.advance()
            args.append(self._parse_term())
            while self.tok().kind == "COMMA":
                self.advance()
                args.append(self._parse_term())
            end = self.expect("RPAREN")
        return StandardLiteral(
            name_tok.text, tuple(args), strong_negation=strong,
            default_negation=default_negation,
            span=self.span_between(start, end),
            predicate_span=name_tok.span(self.file))

    # aggregates ----------------------------------------------------------

    def _parse_aggregate(self, lower_guard, naf: bool, start: Token) -> AggregateLiteral:
        t = self.tok()
        if t.kind == "HASH":
            if t.text not in _AGGREGATE_WORDS:
                raise _ParseFailure(f"unknown aggregate {t.text!r}", t)
            function = _AGGREGATE_WORDS[t.text]
            self.advance()
            self.expect("LBRACE")
        else:
            self.expect("LBRACE")
            function = "count"
        elements = []
        if self.tok().kind != "RBRACE":
            elements.append(self._parse_aggregate_element())
            sep = "COMMA" if self.dialect == Dialect.GRINGO else "SEMI"
            while self.tok().kind == sep:
                self.advance()
                elements.append(self._parse_aggregate_element())
        self.expect("RBRACE")
        upper_guard = None
        t = self.tok()
        if t.kind in _RELOPS:
            op = _RELOPS[t.kind]
            self.advance()
            upper_guard = (self._parse_term(), op)
        elif t.kind in ("INT", "VAR", "IDENT", "STRING", "LPAREN") and not (
                t.kind == "IDENT" and t.text == "not"):
            upper_guard = (self._parse_term(), "<=")
        end = self.tokens[self.pos - 1]
        return AggregateLiteral(function, tuple(elements),
                                lower_guard=lower_guard, upper_guard=upper_guard,
                                dialect=self.dialect, default_negation=naf,
                                span=self.span_between(start, end))

    def _parse_aggregate_element(self) -> AggregateElement:
        if self.dialect == Dialect.DLV:
            terms = [self._parse_term()]
            while self.tok().kind == "COMMA":
                self.advance()
                terms.append(self._parse_term())
            conditions = []
            if self.tok().kind == "COLON":
                self.advance()
                conditions.append(self._parse_element_condition())
                while self.tok().kind == "COMMA":
                    self.advance()
                    conditions.append(self._parse_element_condition())
            return AggregateElement(tuple(terms), tuple(conditions))
        items = [self._parse_element_condition(allow_term=True)]
        while self.tok().kind == "COLON":
            self.advance()
            items.append(self._parse_element_condition(allow_term=True))
        terms = tuple(i for i in items if isinstance(i, Term))
        conditions = tuple(i for i in items if not isinstance(i, Term))
        return AggregateElement(terms, conditions)

    def _parse_element_condition(self, *, allow_term: bool = False):
        start = self.tok()
        naf = False
        if start.kind == "IDENT" and start.text == "not":
            self.advance()
            naf = True
        if self.tok().kind == "MINUS" and self.tok(1).kind == "IDENT":
            save = self.pos
            self.advance()
            lit = self._parse_standard_literal(default_negation=naf, strong=True,
                                               start_token=start)
            if self.tok().kind in _RELOPS:
                self.pos = save
            else:
                return lit
        elif self.tok().kind == "IDENT":
            save = self.pos
            lit = self._parse_standard_literal(default_negation=naf, start_token=start)
            if self.tok().kind in _RELOPS:
                self.pos = save
            else:
                return lit
        left = self._parse_term()
        t = self.tok()
        if t.kind not in _RELOPS:
            if allow_term and not naf:
                return left
            raise _ParseFailure(
                f"expected a literal but found {t.text or 'end of input'!r}", t)
        op = _RELOPS[t.kind]
        self.advance()
        right = self._parse_term()
        end = self.tokens[self.pos - 1]
        return BuiltinLiteral(op, left, right, span=self.span_between(start, end))

    # terms ---------------------------------------------------------------

    def _parse_term(self):
        low = self._parse_additive()
        if self.tok().kind == "DOTDOT":
            dd = self.advance()
            high = self._parse_additive()
            if self.dialect == Dialect.DLV:
                self.diag("warning", "unsupported-construct",
                          "interval terms are not part of the DLV dialect; "
                          "a DLV solver will reject this program",
                          dd.span(self.file))
            span = self._term_span(low, high)
            return Interval(low, high, span=span)
        return low

    def _parse_additive(self):
        left = self._parse_multiplicative()
        while self.tok().kind in ("PLUS", "MINUS"):
            op = self.advance().text
            right = self._parse_multiplicative()
            left = Arithmetic(op, left, right, span=self._term_span(left, right))
        return left

    def _parse_multiplicative(self):
        left = self._parse_unary()
        while self.tok().kind in ("STAR", "SLASH"):
            op = self.advance().text
            right = self._parse_unary()
            left = Arithmetic(op, left, right, span=self._term_span(left, right))
        return left

    def _parse_unary(self):
        t = self.tok()
        if t.kind == "MINUS":
            self.advance()
            inner = self._parse_unary()
            span = SourceSpan(self.file, t.line, t.col,
                              inner.span.end_line, inner.span.end_col) if inner.span else None
            if isinstance(inner, Constant) and inner.kind == "int":
                return Constant(-inner.value, span=span)
            return Arithmetic("-", Constant(0), inner, span=span)
        return self._parse_primary()

    def _parse_primary(self):
        t = self.tok()
        if t.problem:
            raise _ParseFailure(t.problem, t)
        if t.kind == "INT":
            self.advance()
            return Constant(int(t.text), span=t.span(self.file))
        if t.kind == "STRING":
            self.advance()
            return Constant(t.text, "string", span=t.span(self.file))
        if t.kind == "VAR":
            self.advance()
            return Variable(t.text, span=t.span(self.file))
        if t.kind == "IDENT":
            self.advance()
            if self.tok().kind == "LPAREN":
                self.advance()
                args = [self._parse_term()]
                while self.tok().kind == "COMMA":
                    self.advance()
                    args.append(self._parse_term())
                close = self.expect("RPAREN")
                span = SourceSpan(self.file, t.line, t.col, close.end_line, close.end_col)
                return Function(t.text, tuple(args), span=span)
            return Constant(t.text, "symbol", span=t.span(self.file))
        if t.kind == "LPAREN":
            self.advance()
            inner = self._parse_term()
            self.expect("RPAREN")
            return inner
        raise _ParseFailure(f"expected a term but found {t.text or 'end of input'!r}", t)

    def _term_span(self, left, right) -> SourceSpan | None:
        if left.span is None or right.span is None:
            return None
        return SourceSpan(self.file, left.span.start_line, left.span.start_col,
                          right.span.end_line, right.span.end_col)

    # assignment flags ----------------------------------------------------

    def _mark_assignments(self, body: list) -> list:
        bound: set[str] = set()
        for lit in body:
            if (isinstance(lit, StandardLiteral) and not lit.default_negation
                    and not lit.conditions):
                for arg in lit.args:
                    bound |= term_binding_variables(arg)
        out = []
        for lit in body:
            if isinstance(lit, BuiltinLiteral) and lit.op == "=":
                sides = 0
                for side in (lit.left, lit.right):
                    if isinstance(side, Variable) and side.name not in bound:
                        sides += 1
                if sides == 1:
                    lit = replace(lit, is_assignment=True)
            out.append(lit)
        return out


def term_binding_variables(term) -> set[str]:
    """Variables a positive body literal can bind through this argument.

    Arithmetic and interval interiors never bind: matching cannot invert them.
    """
    if isinstance(term, Variable):
        return {term.name}
    if isinstance(term, Function):
        out: set[str] = set()
        for arg in term.args:
            out |= term_binding_variables(arg)
        return out
    return set()


def term_all_variables(term) -> set[str]:
    if isinstance(term, Variable):
        return {term.name}
    if isinstance(term, Function):
        out: set[str] = set()
        for arg in term.args:
            out |= term_all_variables(arg)
        return out
    if isinstance(term, Arithmetic):
        return term_all_variables(term.left) | term_all_variables(term.right)
    if isinstance(term, Interval):
        return term_all_variables(term.low) | term_all_variables(term.high)
    return set()


# ---------------------------------------------------------------------------
# meta commands

_META_PAYLOAD = re.compile(r"^\s*([A-Za-z_]\w*)\s*\(\s*([A-Za-z_]\w*)\s*\)\s*$")


def parse_meta(comments) -> tuple[list[MetaCommand], list[Diagnostic]]:
    """Extract meta commands from comment-shaped records.

    Accepts anything with .text/.span attributes. Only the line form "%!" and
    the block form "%*! ... *%" are inspected; the single known command is
    name(identifier), which names the next rule.
    """
    metas: list[MetaCommand] = []
    diagnostics: list[Diagnostic] = []
    for comment in comments:
        text = comment.text
        if text.startswith("%*!"):
            payload = text[3:]
            if payload.endswith("*%"):
                payload = payload[:-2]
        elif text.startswith("%!"):
            payload = text[2:]
        else:
            continue
        match = _META_PAYLOAD.match(payload)
        if not match:
            diagnostics.append(Diagnostic(
                "warning", "meta-malformed",
                f"meta command {payload.strip()!r} is not of the form name(identifier)",
                comment.span))
            continue
        kind, argument = match.groups()
        if kind != "name":
            diagnostics.append(Diagnostic(
                "warning", "meta-unknown-command",
                f"unknown meta command {kind!r}; supported: name", comment.span))
            continue
        metas.append(MetaCommand(kind, argument, target=None, span=comment.span))
    return metas, diagnostics


# ---------------------------------------------------------------------------
# comment attachment

def _attach_comments(rules: list[Rule], raw_comments: list[_RawComment],
                     source: str) -> tuple[list[Rule], list[Comment]]:
    lines = source.split("\n")
    comment_lines: set[int] = set()
    for rc in raw_comments:
        comment_lines.update(range(rc.span.start_line, rc.span.end_line + 1))

    def is_blank(lineno: int) -> bool:
        return lineno > len(lines) or not lines[lineno - 1].strip()

    per_rule: dict[int, list[Comment]] = {}
    standalone: list[Comment] = []
    for rc in raw_comments:
        target = None
        for idx, rule in enumerate(rules):
            if rule.span and rule.span.contains(rc.span.start_line, rc.span.start_col):
                target = idx
                break
        if target is None:
            for idx, rule in enumerate(rules):
                if rule.span and rule.span.end_line == rc.span.start_line:
                    target = idx  # trailing: last rule ending on this line wins
        if target is None:
            candidates = [
                (rule.span.start_line, idx) for idx, rule in enumerate(rules)
                if rule.span and rule.span.start_line > rc.span.end_line]
            if candidates:
                rule_line, idx = min(candidates)
                gap_lines = range(rc.span.end_line + 1, rule_line)
                blanks = 0
                adjacent = True
                for lineno in gap_lines:
                    if lineno in comment_lines:
                        continue
                    if is_blank(lineno):
                        blanks += 1
                    else:
                        adjacent = False
                        break
                if adjacent and blanks <= 1:
                    target = idx
        comment = Comment(rc.text, rc.kind, span=rc.span, attached_to=target)
        if target is None:
            standalone.append(comment)
        else:
            per_rule.setdefault(target, []).append(comment)
    out_rules = [
        replace(rule, comments=tuple(per_rule.get(idx, ())))
        for idx, rule in enumerate(rules)]
    return out_rules, standalone


# ---------------------------------------------------------------------------
# entry points

def parse(source: str, dialect: Dialect | str, *, filename: str = "<input>") -> ParseResult:
    dialect = Dialect(dialect)
    tokens, raw_comments, lex_diagnostics = Lexer(source, filename).run()
    parser = _Parser(tokens, dialect, source, filename)
    rules = parser.parse_program()

    metas, meta_diagnostics = parse_meta(
        [rc for rc in raw_comments if rc.is_meta])
    resolved: list[MetaCommand] = []
    names: dict[int, str] = {}
    for meta in metas:
        target = None
        for idx, rule in enumerate(rules):
            if rule.span and ((rule.span.start_line, rule.span.start_col)
                              > (meta.span.end_line, meta.span.end_col)):
                target = idx
                break
        if target is None:
            meta_diagnostics.append(Diagnostic(
                "warning", "meta-no-target",
                "meta command does not precede any rule", meta.span))
            resolved.append(meta)
            continue
        names[target] = meta.argument
        resolved.append(replace(meta, target=target))
    rules = [replace(rule, name=names[idx]) if idx in names else rule
             for idx, rule in enumerate(rules)]

    rules, standalone = _attach_comments(
        rules, [rc for rc in raw_comments if not rc.is_meta], source)
    program = Program(dialect, tuple(rules), tuple(standalone),
                      meta_commands=tuple(resolved), source=source)
    diagnostics = lex_diagnostics + parser.diagnostics + meta_diagnostics
    return ParseResult(program, diagnostics)


def parse_file(path: str | Path, dialect: Dialect | str | None = None) -> ParseResult:
    path = Path(path)
    if dialect is None:
        dialect = detect_dialect(path)
    return parse(path.read_text(), dialect, filename=str(path))


def parse_interpretation(text: str, dialect: Dialect | str = Dialect.GRINGO) -> Interpretation:
    """Read a set of ground literals: whitespace/comma separated, braces and
    fact dots optional, duplicates collapse."""
    dialect = Dialect(dialect)
    tokens, _comments, _diags = Lexer(text, "<interpretation>").run()
    pos = 0

    def tok():
        return tokens[min(pos, len(tokens) - 1)]

    literals: set[GroundLiteral] = set()
    if tok().kind == "LBRACE":
        pos += 1
    while tok().kind != "EOF":
        if tok().kind in ("COMMA", "DOT", "RBRACE"):
            pos += 1
            continue
        lit, pos = _read_ground_literal(tokens, pos)
        if lit.complement() in literals:
            raise ConsistencyError(
                f"interpretation contains both {lit.predicate} and its strong complement")
        literals.add(lit)
    return Interpretation(frozenset(literals))


def parse_ground_literal(text: str) -> GroundLiteral:
    tokens, _comments, _diags = Lexer(text, "<literal>").run()
    lit, pos = _read_ground_literal(tokens, 0)
    if tokens[pos].kind not in ("EOF", "DOT"):
        raise FormatError(f"trailing content after literal in {text!r}",
                          line=tokens[pos].line)
    return lit


def parse_ground_term(text: str) -> Term:
    """Read a single ground term, e.g. an element identifier like "cell(2,4)"."""
    tokens, _comments, _diags = Lexer(text, "<term>").run()
    term, pos = _read_ground_term(tokens, 0)
    if tokens[pos].kind != "EOF":
        raise FormatError(f"trailing content after term in {text!r}",
                          line=tokens[pos].line)
    return term


def _read_ground_literal(tokens: list[Token], pos: int) -> tuple[GroundLiteral, int]:
    strong = False
    t = tokens[pos]
    if t.kind == "MINUS":
        strong = True
        pos += 1
        t = tokens[pos]
    if t.kind != "IDENT":
        raise FormatError(f"expected a ground literal but found {t.text or 'end of input'!r}",
                          line=t.line)
    name = t.text
    pos += 1
    args: list = []
    if tokens[pos].kind == "LPAREN":
        pos += 1
        arg, pos = _read_ground_term(tokens, pos)
        args.append(arg)
        while tokens[pos].kind == "COMMA":
            pos += 1
            arg, pos = _read_ground_term(tokens, pos)
            args.append(arg)
        if tokens[pos].kind != "RPAREN":
            raise FormatError("unclosed argument list", line=tokens[pos].line)
        pos += 1
    return GroundLiteral(name, tuple(args), strong_negation=strong), pos


def _read_ground_term(tokens: list[Token], pos: int):
    t = tokens[pos]
    if t.kind == "MINUS" and tokens[pos + 1].kind == "INT":
        return Constant(-int(tokens[pos + 1].text)), pos + 2
    if t.kind == "INT":
        return Constant(int(t.text)), pos + 1
    if t.kind == "STRING":
        if t.problem:
            raise FormatError(t.problem, line=t.line)
        return Constant(t.text, "string"), pos + 1
    if t.kind == "IDENT":
        pos += 1
        if tokens[pos].kind == "LPAREN":
            pos += 1
            args = []
            arg, pos = _read_ground_term(tokens, pos)
            args.append(arg)
            while tokens[pos].kind == "COMMA":
                pos += 1
                arg, pos = _read_ground_term(tokens, pos)
                args.append(arg)
            if tokens[pos].kind != "RPAREN":
                raise FormatError("unclosed argument list", line=tokens[pos].line)
            return Function(t.text, tuple(args)), pos + 1
        return Constant(t.text, "symbol"), pos
    raise FormatError(f"expected a ground term but found {t.text or 'end of input'!r}",
                      line=t.line)

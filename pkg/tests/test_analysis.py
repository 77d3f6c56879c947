"""Outline, occurrence lookup, and the safety / assignment checks."""

import random

from aspdesk.analysis import (
    build_outline,
    check_assignments,
    check_safety,
    lint,
    occurrences_at,
)
from aspdesk.model import (
    AggregateLiteral,
    Arithmetic,
    BuiltinLiteral,
    Function,
    Interval,
    StandardLiteral,
    Variable,
)
from aspdesk.parsing import parse


def program_of(source, dialect="gringo"):
    result = parse(source, dialect)
    assert not [d for d in result.diagnostics if d.severity == "error"], \
        result.diagnostics
    return result.program


def unsafe_names(program):
    out = []
    for d in check_safety(program):
        assert d.severity == "error" and d.code == "unsafe-variable"
        out.append(d.message.split()[1])
    return sorted(out)


# ---------------------------------------------------------------------------
# outline

def test_outline_structure():
    program = program_of("p(1).\nq(X) :- p(X), not r(X).\n:- q(9).")
    outline = build_outline(program, "demo")
    assert outline.kind == "program" and outline.label == "demo"
    assert [n.kind for n in outline.children] == ["rule"] * 3

    fact, rule, constraint = outline.children
    assert fact.label == "p(1)."
    assert [p.kind for p in fact.children] == ["head"]
    assert [p.kind for p in rule.children] == ["head", "body"]
    assert [p.kind for p in constraint.children] == ["body"]

    body = rule.children[1]
    assert [n.label for n in body.children] == ["p(X)", "not r(X)"]
    assert all(n.kind == "literal" for n in body.children)


def test_outline_uses_rule_names_when_given():
    program = program_of("%! name(pick)\nq(X) :- p(X).")
    outline = build_outline(program)
    assert outline.children[0].label == "pick"


def test_outline_clips_long_rules():
    head = "p(" + ",".join(f"c{i}" for i in range(20)) + ")"
    program = program_of(head + ".")
    label = build_outline(program).children[0].label
    assert len(label) == 40
    assert label.endswith("...")


def test_outline_labels_collapse_whitespace():
    program = program_of("q(X) :-\n    p(X),\n    r(X).")
    assert build_outline(program).children[0].label == "q(X) :- p(X), r(X)."


def test_outline_to_dict_is_json_shaped():
    outline = build_outline(program_of("a."))
    data = outline.to_dict()
    assert set(data) == {"kind", "label", "span", "children"}
    assert data["children"][0]["kind"] == "rule"
    assert data["children"][0]["span"]["start_line"] == 1


# ---------------------------------------------------------------------------
# occurrences

def test_predicate_occurrences_span_the_document():
    source = "p(1).\nq(X) :- p(X).\nr :- p(2)."
    program = program_of(source)
    spans = occurrences_at(program, 1, 1)
    assert [s.start_line for s in spans] == [1, 2, 3]
    assert all(s.extract(source) == "p" for s in spans)


def test_predicates_are_keyed_by_arity_and_sign():
    program = program_of("p(1).\np(1,2).\n-p(3).")
    assert len(occurrences_at(program, 1, 1)) == 1  # p/1 only
    assert len(occurrences_at(program, 2, 1)) == 1  # p/2 only
    assert len(occurrences_at(program, 3, 2)) == 1  # -p/1 only


def test_variable_occurrences_stay_inside_their_rule():
    source = "a(X) :- b(X).\nc(X) :- d(X)."
    program = program_of(source)
    spans = occurrences_at(program, 1, 3)
    assert len(spans) == 2
    assert all(s.start_line == 1 for s in spans)


def test_constant_occurrences_span_the_document():
    program = program_of("a(42).\nb :- c(42), d(43).")
    spans = occurrences_at(program, 1, 3)
    assert [(s.start_line, s.start_col) for s in spans] == [(1, 3), (2, 8)]


def test_position_off_any_symbol_returns_nothing():
    program = program_of("a(1) :- b.")
    assert occurrences_at(program, 1, 5) == []   # the ')'
    assert occurrences_at(program, 9, 1) == []   # past the end


def test_variables_inside_nested_terms_are_found():
    source = "a :- b(f(g(Long))), c(Long)."
    program = program_of(source)
    spans = occurrences_at(program, 1, 12)
    assert len(spans) == 2
    assert all(s.extract(source) == "Long" for s in spans)


# ---------------------------------------------------------------------------
# safety: fixed cases

def test_bound_head_variable_is_safe():
    assert unsafe_names(program_of("a(X) :- c(X).")) == []


def test_negated_binder_is_not_a_binder():
    assert unsafe_names(program_of("a(X) :- not c(X).")) == ["X"]


def test_comparisons_never_bind():
    assert unsafe_names(program_of("a(X) :- X = 3.")) == ["X"]
    assert unsafe_names(program_of("a :- c(Y), Y < Z.")) == ["Z"]


def test_arithmetic_interiors_do_not_bind():
    assert unsafe_names(program_of("a(X) :- c(X+1).")) == ["X"]
    assert unsafe_names(program_of("a(X) :- c(X+1), d(X).")) == []


def test_interval_interiors_do_not_bind():
    assert unsafe_names(program_of("a(X) :- c(X..3).")) == ["X"]


def test_function_arguments_do_bind():
    assert unsafe_names(program_of("a(X) :- c(f(X)).")) == []


def test_strong_negation_still_binds():
    assert unsafe_names(program_of("a(X) :- -c(X).")) == []


def test_condition_local_variables_need_local_cover():
    assert unsafe_names(program_of("ok :- p(X) : q(X).")) == []
    assert unsafe_names(program_of("ok :- p(Y) : q(X).")) == ["Y"]
    assert unsafe_names(program_of("ok :- p(Y) : q(X) : r(Y).")) == []


def test_shared_condition_variables_need_a_global_binder():
    assert unsafe_names(program_of("r(Y) :- q(Y), p(X) : s(X,Y).")) == []
    assert unsafe_names(program_of("r(Y) :- not q(Y), p(X) : s(X,Y).")) == ["Y"]
    # a conditional literal's cover never reaches the rest of the rule
    assert unsafe_names(program_of("b(X) :- e(X) : f(X).")) == ["X"]


def test_negated_conditions_do_not_cover():
    assert unsafe_names(program_of("ok :- p(X) : not q(X).")) == ["X"]


def test_aggregate_element_locals():
    assert unsafe_names(program_of("big :- #count{X : p(X)} > 2.")) == []
    assert unsafe_names(program_of("big :- #count{X : q(Y)} > 2.")) == ["X"]
    assert unsafe_names(program_of("big :- #sum{X : p(X,Y)} > 2.")) == []
    # a DLV element carries its whole term tuple
    assert unsafe_names(program_of(
        "big :- #sum{X,Y : p(X,Y)} > 2.", "dlv")) == []
    # a bare term is its own element, so nothing covers it
    assert unsafe_names(program_of("big :- #count{X, Y : p(Y)} > 2.")) == ["X"]


def test_aggregate_guards_need_global_binders():
    assert unsafe_names(program_of("big :- #count{X : p(X)} > N.")) == ["N"]
    assert unsafe_names(program_of(
        "big :- m(N), #count{X : p(X)} > N.")) == []


def test_element_variables_shared_with_the_rule():
    assert unsafe_names(program_of(
        "w(Y) :- r(Y), #count{X : p(X,Y)} > 1.")) == []
    assert unsafe_names(program_of(
        "w(Y) :- #count{X : p(X,Y)} > 1.")) == ["Y"]


def test_anonymous_variables_are_exempt():
    assert unsafe_names(program_of("a :- not c(_).")) == []
    assert unsafe_names(program_of("a(X) :- c(X,_).")) == []


def test_each_unsafe_variable_reported_once_at_first_use():
    source = "a(X,X) :- c(Y), X < Y."
    program = program_of(source)
    diags = check_safety(program)
    assert len(diags) == 1
    assert diags[0].span.extract(source) == "X"
    assert (diags[0].span.start_line, diags[0].span.start_col) == (1, 3)


def test_facts_with_variables_are_unsafe():
    assert unsafe_names(program_of("a(X).")) == ["X"]


# ---------------------------------------------------------------------------
# assignment direction

def test_constant_assignment_target_warns():
    program = program_of("a(X) :- 3 = X.")
    diags = check_assignments(program)
    assert [(d.severity, d.code) for d in diags] \
        == [("warning", "const-assignment-lhs")]


def test_sensible_assignments_do_not_warn():
    assert check_assignments(program_of("a :- c(Y), X = Y+1, d(X).")) == []
    assert check_assignments(program_of("a :- c(X), X == 3.")) == []
    # with X already bound this equality is a test, not an assignment
    assert check_assignments(program_of("a :- c(X), 3 = X.")) == []


def test_lint_combines_both_checks():
    program = program_of("a(W) :- 3 = W.")
    codes = [d.code for d in lint(program)]
    assert codes == ["unsafe-variable", "const-assignment-lhs"]


# ---------------------------------------------------------------------------
# safety: generated corpus against an independent classifier
#
# The classifier below recomputes unsafe variables straight from the rule
# AST with its own walkers; the test compares its verdict with check_safety
# on every generated rule.

def oracle_binders(term):
    if isinstance(term, Variable):
        return {term.name}
    if isinstance(term, Function):
        out = set()
        for arg in term.args:
            out |= oracle_binders(arg)
        return out
    return set()  # constants; arithmetic and interval interiors never bind


def oracle_mentions(term):
    if isinstance(term, Variable):
        return {term.name}
    if isinstance(term, Function):
        out = set()
        for arg in term.args:
            out |= oracle_mentions(arg)
        return out
    if isinstance(term, Arithmetic):
        return oracle_mentions(term.left) | oracle_mentions(term.right)
    if isinstance(term, Interval):
        return oracle_mentions(term.low) | oracle_mentions(term.high)
    return set()


def oracle_unsafe(rule):
    binders = set()
    for lit in rule.body:
        if (isinstance(lit, StandardLiteral) and not lit.default_negation
                and not lit.conditions):
            for arg in lit.args:
                binders |= oracle_binders(arg)

    rule_level = set()
    scopes = []  # (variables of the scope, variables its conditions bind)
    for lit in (*rule.head, *rule.body):
        if isinstance(lit, StandardLiteral) and lit.conditions:
            seen, cover = set(), set()
            for arg in lit.args:
                seen |= oracle_mentions(arg)
            for cond in lit.conditions:
                for arg in cond.args:
                    seen |= oracle_mentions(arg)
                if not cond.default_negation:
                    for arg in cond.args:
                        cover |= oracle_binders(arg)
            scopes.append((seen, cover))
        elif isinstance(lit, StandardLiteral):
            for arg in lit.args:
                rule_level |= oracle_mentions(arg)
        elif isinstance(lit, BuiltinLiteral):
            rule_level |= oracle_mentions(lit.left)
            rule_level |= oracle_mentions(lit.right)
        elif isinstance(lit, AggregateLiteral):
            for guard in (lit.lower_guard, lit.upper_guard):
                if guard:
                    rule_level |= oracle_mentions(guard[0])
            for element in lit.elements:
                seen, cover = set(), set()
                for term in element.terms:
                    seen |= oracle_mentions(term)
                for cond in element.conditions:
                    if isinstance(cond, StandardLiteral):
                        for arg in cond.args:
                            seen |= oracle_mentions(arg)
                        if not cond.default_negation:
                            for arg in cond.args:
                                cover |= oracle_binders(arg)
                    else:
                        seen |= oracle_mentions(cond.left)
                        seen |= oracle_mentions(cond.right)
                scopes.append((seen, cover))

    bad = {v for v in rule_level if v not in binders}
    for seen, cover in scopes:
        for v in seen:
            if v in rule_level:
                if v not in binders:
                    bad.add(v)
            elif v not in cover:
                bad.add(v)
    bad.discard("_")
    return bad


_VARS = ["X", "Y", "Z", "W", "V", "U"]
_NAMES = ["p", "q", "r", "s", "link"]


def gen_term(rng, counters, depth=0):
    roll = rng.random()
    if roll < 0.45:
        return rng.choice(_VARS)
    if roll < 0.55:
        return str(rng.randrange(0, 9))
    if roll < 0.62:
        return rng.choice(["a", "b"])
    if roll < 0.68:
        counters["anonymous"] += 1
        return "_"
    if roll < 0.78 and depth < 2:
        counters["function"] += 1
        return f"f({gen_term(rng, counters, depth + 1)})"
    if roll < 0.9:
        counters["arithmetic"] += 1
        return f"{rng.choice(_VARS)}{rng.choice(['+', '-', '*'])}{rng.randrange(1, 4)}"
    counters["interval"] += 1
    low = rng.choice([str(rng.randrange(0, 3)), rng.choice(_VARS)])
    return f"{low}..{rng.randrange(3, 7)}"


def gen_atom(rng, counters, max_arity=3):
    name = rng.choice(_NAMES)
    arity = rng.randrange(0, max_arity)
    if not arity:
        return name
    return f"{name}({','.join(gen_term(rng, counters) for _ in range(arity))})"


def gen_plain_literal(rng, counters):
    text = gen_atom(rng, counters)
    if rng.random() < 0.2:
        counters["strong"] += 1
        text = "-" + text
    if rng.random() < 0.3:
        counters["naf"] += 1
        text = "not " + text
    return text


def gen_condition(rng, counters):
    text = gen_atom(rng, counters)
    if rng.random() < 0.2:
        counters["naf"] += 1
        text = "not " + text
    return text


def gen_body_literal(rng, counters, dialect):
    roll = rng.random()
    if roll < 0.5:
        return gen_plain_literal(rng, counters)
    if roll < 0.7:
        counters["builtin"] += 1
        op = rng.choice(["<", "<=", ">", ">=", "=", "!="])
        return f"{gen_term(rng, counters)} {op} {gen_term(rng, counters)}"
    if roll < 0.85 and dialect == "gringo":
        counters["conditional"] += 1
        parts = [gen_atom(rng, counters, max_arity=2)]
        for _ in range(rng.randrange(1, 3)):
            parts.append(gen_condition(rng, counters))
        return " : ".join(parts)
    counters["aggregate"] += 1
    func = rng.choice(["#count", "#sum", "#min", "#max"])
    terms = ",".join(rng.choice(_VARS) for _ in range(rng.randrange(1, 3)))
    conds = ", ".join(gen_condition(rng, counters)
                      for _ in range(rng.randrange(1, 3)))
    guard = rng.choice([str(rng.randrange(0, 5)), rng.choice(_VARS)])
    op = rng.choice(["<", "<=", ">", ">=", "="])
    if rng.random() < 0.5:
        return f"#{func[1:]}{{{terms} : {conds}}} {op} {guard}"
    return f"{guard} {op} #{func[1:]}{{{terms} : {conds}}}"


def gen_rule(rng, counters, dialect):
    sep = " | " if dialect == "gringo" else " v "
    heads = sep.join(gen_atom(rng, counters)
                     for _ in range(rng.randrange(0, 3)))
    body = [gen_body_literal(rng, counters, dialect)
            for _ in range(rng.randrange(0 if heads else 1, 4))]
    if not body:
        return f"{heads}."
    if not heads:
        return f":- {', '.join(body)}."
    return f"{heads} :- {', '.join(body)}."


def test_safety_matches_independent_classifier_on_generated_rules():
    rng = random.Random(20240821)
    counters = {k: 0 for k in ["naf", "strong", "builtin", "conditional",
                               "aggregate", "arithmetic", "interval",
                               "function", "anonymous"]}
    checked = 0
    for case in range(160):
        dialect = "dlv" if case % 4 == 3 else "gringo"
        source = gen_rule(rng, counters, dialect)
        result = parse(source, dialect)
        assert not [d for d in result.diagnostics if d.severity == "error"], \
            (source, result.diagnostics)
        rule = result.program.rules[0]
        expected = sorted(oracle_unsafe(rule))
        assert unsafe_names(result.program) == expected, source
        checked += 1
    assert checked == 160
    for feature, count in counters.items():
        assert count >= 8, (feature, counters)

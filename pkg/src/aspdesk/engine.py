"""Built-in grounding and answer-set search.

The engine exists so the workbench can answer small queries (stepping,
visualization, abduction) without shelling out to an external solver. It
covers disjunctive programs with default and strong negation, arithmetic,
comparisons, intervals and body conditionals; aggregates, choice heads and
optimisation are deliberately left to external solvers.

Grounding is bottom-up: a fixpoint over-approximates the derivable atoms
while ignoring default negation, then one final pass instantiates every rule
over that base, dropping negative literals whose atom is underivable. The
search is a DPLL enumeration of the classical models of the rules (I is a
model of the reduct P^I exactly when I is a classical model of P), pruned by
a supportedness condition: a true atom needs a rule where it is the only true
head atom, the positive body holds without it and the negative body is clean.
Every surviving full assignment still gets a proper minimality check against
its reduct. Results are deterministic: all answer sets are collected, sorted
by their atom indices, and only then truncated to any requested limit.

Recursion through function symbols or arithmetic makes the base grow without
bound; the capacity limits turn that into a CapacityError instead of a hang.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .analysis import check_safety, literal_variables, rule_variables
from .errors import (
    CapacityError,
    EvaluationError,
    OperationCancelled,
    SafetyError,
    UnsupportedConstructError,
)
from .model import (
    AggregateLiteral,
    Arithmetic,
    BuiltinLiteral,
    Constant,
    Function,
    GroundLiteral,
    Interpretation,
    Interval,
    Program,
    Rule,
    StandardLiteral,
    Term,
    Variable,
    atom_key,
    pretty_print,
    term_key,
)

CancelCheck = Callable[[], bool]


@dataclass(frozen=True)
class EngineLimits:
    max_atoms: int = 5000
    max_rules: int = 200000


DEFAULT_LIMITS = EngineLimits()


@dataclass(frozen=True)
class GroundRule:
    head: tuple[GroundLiteral, ...]
    body_pos: tuple[GroundLiteral, ...]
    body_neg: tuple[GroundLiteral, ...]

    def key(self):
        return (tuple(atom_key(a) for a in self.head),
                tuple(atom_key(a) for a in self.body_pos),
                tuple(atom_key(a) for a in self.body_neg))


@dataclass(frozen=True)
class GroundProgram:
    atoms: tuple[GroundLiteral, ...]
    rules: tuple[GroundRule, ...]


def _cancelled(cancel: CancelCheck | None) -> None:
    if cancel is not None and cancel():
        raise OperationCancelled("operation cancelled")


# ---------------------------------------------------------------------------
# term evaluation

class _Unevaluable(Exception):
    pass


def _eval_term(term: Term, sub: dict) -> Term:
    """Fully evaluate a term to a ground Constant or Function."""
    if isinstance(term, Constant):
        return term if term.span is None else Constant(term.value, term.kind)
    if isinstance(term, Variable):
        if term.is_anonymous:
            raise _Unevaluable
        try:
            return sub[term.name]
        except KeyError:
            raise _Unevaluable from None
    if isinstance(term, Function):
        return Function(term.name, tuple(_eval_term(a, sub) for a in term.args))
    if isinstance(term, Arithmetic):
        left = _eval_term(term.left, sub)
        right = _eval_term(term.right, sub)
        if not (isinstance(left, Constant) and left.kind == "int"
                and isinstance(right, Constant) and right.kind == "int"):
            raise EvaluationError(
                f"arithmetic needs integer operands, got "
                f"{pretty_print(term)}")
        a, b = left.value, right.value
        if term.op == "+":
            return Constant(a + b)
        if term.op == "-":
            return Constant(a - b)
        if term.op == "*":
            return Constant(a * b)
        if b == 0:
            raise EvaluationError(f"division by zero in {pretty_print(term)}")
        return Constant(a // b)  # floor division, like gringo
    if isinstance(term, Interval):
        raise EvaluationError("an interval is not a value here")
    raise EvaluationError(f"cannot evaluate {term!r}")


def _interval_bounds(term: Interval, sub: dict) -> tuple[int, int]:
    low = _eval_term(term.low, sub)
    high = _eval_term(term.high, sub)
    if not (isinstance(low, Constant) and low.kind == "int"
            and isinstance(high, Constant) and high.kind == "int"):
        raise EvaluationError(
            f"interval endpoints must be integers in {pretty_print(term)}")
    return low.value, high.value


def _expand_term(term: Term, sub: dict) -> list[Term]:
    """Ground instances of a term; each interval multiplies the result."""
    if isinstance(term, Interval):
        low, high = _interval_bounds(term, sub)
        return [Constant(v) for v in range(low, high + 1)]
    if isinstance(term, Function):
        combos: list[list[Term]] = [[]]
        for arg in term.args:
            expanded = _expand_term(arg, sub)
            combos = [c + [e] for c in combos for e in expanded]
        return [Function(term.name, tuple(c)) for c in combos]
    return [_eval_term(term, sub)]


def _compare(op: str, left: Term, right: Term) -> bool:
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    if (isinstance(left, Constant) and left.kind == "int"
            and isinstance(right, Constant) and right.kind == "int"):
        a, b = left.value, right.value
    else:
        a, b = term_key(left), term_key(right)
    return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]


# ---------------------------------------------------------------------------
# matching

def _match_term(pattern: Term, value: Term, sub: dict, checks: list) -> dict | None:
    if isinstance(pattern, Variable):
        if pattern.is_anonymous:
            return sub
        bound = sub.get(pattern.name)
        if bound is None:
            new = dict(sub)
            new[pattern.name] = value
            return new
        return sub if bound == value else None
    if isinstance(pattern, Constant):
        stripped = Constant(pattern.value, pattern.kind)
        return sub if stripped == value else None
    if isinstance(pattern, Function):
        if not (isinstance(value, Function) and value.name == pattern.name
                and len(value.args) == len(pattern.args)):
            return None
        for p, v in zip(pattern.args, value.args):
            sub = _match_term(p, v, sub, checks)
            if sub is None:
                return None
        return sub
    # arithmetic and intervals cannot bind; test them once enough is known
    checks.append((pattern, value))
    return sub


def _run_checks(checks: list, sub: dict) -> bool | None:
    """True/False once decidable, None while some check still has free variables."""
    for pattern, value in checks:
        try:
            if isinstance(pattern, Interval):
                low, high = _interval_bounds(pattern, sub)
                ok = (isinstance(value, Constant) and value.kind == "int"
                      and low <= value.value <= high)
            else:
                ok = _eval_term(pattern, sub) == value
        except _Unevaluable:
            return None
        if not ok:
            return False
    return True


# ---------------------------------------------------------------------------
# rule preparation (conditionals expanded, shape checked)

@dataclass
class _Prepared:
    head: tuple[StandardLiteral, ...]
    body: tuple  # StandardLiteral | BuiltinLiteral, conditions already gone


def _shape_check(rule: Rule) -> None:
    for lit in rule.head:
        if isinstance(lit, StandardLiteral) and lit.conditions:
            raise UnsupportedConstructError(
                "conditional literals in a rule head are not evaluated internally")
    for lit in rule.body:
        if isinstance(lit, AggregateLiteral):
            raise UnsupportedConstructError(
                "aggregates are not evaluated internally; route this program "
                "to an external solver")
        if isinstance(lit, StandardLiteral) and lit.conditions and lit.default_negation:
            raise UnsupportedConstructError(
                "a default-negated conditional literal is not evaluated internally")


def _pred_key(lit) -> tuple:
    return (lit.predicate, len(lit.args), lit.strong_negation)


def _deterministic_predicates(rules: list[Rule]) -> set[tuple]:
    """Predicates whose extension is fixed before any guessing happens.

    A predicate stays deterministic unless a rule defining it is disjunctive,
    uses default negation or conditionals, or depends on a non-deterministic
    predicate. Greatest fixpoint, so positive recursion is fine.
    """
    defining: dict[tuple, list[Rule]] = {}
    preds: set[tuple] = set()
    for rule in rules:
        for lit in (*rule.head, *rule.body):
            if isinstance(lit, StandardLiteral):
                preds.add(_pred_key(lit))
                for cond in lit.conditions:
                    if isinstance(cond, StandardLiteral):
                        preds.add(_pred_key(cond))
        for h in rule.head:
            defining.setdefault(_pred_key(h), []).append(rule)
    det = set(preds)
    changed = True
    while changed:
        changed = False
        for pred in sorted(det):
            for rule in defining.get(pred, ()):
                bad = len(rule.head) != 1
                for lit in rule.body:
                    if isinstance(lit, StandardLiteral):
                        if lit.default_negation or lit.conditions:
                            bad = True
                        elif _pred_key(lit) not in det:
                            bad = True
                    elif not isinstance(lit, BuiltinLiteral):
                        bad = True
                if bad:
                    det.discard(pred)
                    changed = True
                    break
    return det


class _Grounder:
    def __init__(self, program: Program, limits: EngineLimits,
                 cancel: CancelCheck | None):
        self.program = program
        self.limits = limits
        self.cancel = cancel
        self.index: dict[tuple, list[GroundLiteral]] = {}
        self.atoms: set[GroundLiteral] = set()

    # -- derivable-base maintenance

    def _add_atom(self, atom: GroundLiteral) -> bool:
        if atom in self.atoms:
            return False
        self.atoms.add(atom)
        if len(self.atoms) > self.limits.max_atoms:
            raise CapacityError(
                f"grounding exceeded {self.limits.max_atoms} atoms; the "
                "program may recurse through function symbols or arithmetic")
        self.index.setdefault((atom.predicate, atom.arity, atom.strong_negation),
                              []).append(atom)
        return True

    def _candidates(self, lit: StandardLiteral) -> list[GroundLiteral]:
        return self.index.get((lit.predicate, lit.arity, lit.strong_negation), [])

    # -- joins

    def _solutions(self, body: Iterable, *, with_neg: bool,
                   neg_db: set[GroundLiteral] | None = None):
        """Substitutions satisfying the body against the current base.

        Yields (sub, matched positive atoms, ground negative literals). When
        with_neg is false, negative literals are ignored apart from interval
        expansion; when neg_db is given, negative literals are decided against
        it (exact, for deterministic conditions).
        """
        states: list[tuple[dict, list, list, list]] = [({}, [], [], [])]
        for lit in body:
            _cancelled(self.cancel)
            new_states = []
            if isinstance(lit, BuiltinLiteral):
                for sub, pos, neg, checks in states:
                    verdict = _builtin_holds(lit, sub)
                    if verdict is False:
                        continue
                    if verdict is None:
                        checks = checks + [lit]
                    new_states.append((sub, pos, neg, checks))
            elif isinstance(lit, StandardLiteral) and not lit.default_negation:
                for sub, pos, neg, checks in states:
                    for atom in self._candidates(lit):
                        local: list = []
                        got = sub
                        for p, v in zip(lit.args, atom.args):
                            got = _match_term(p, v, got, local)
                            if got is None:
                                break
                        if got is None:
                            continue
                        verdict = _run_checks(local, got)
                        if verdict is False:
                            continue
                        pending = checks + local if verdict is None else checks
                        new_states.append((got, pos + [atom], neg, pending))
            else:  # default-negated standard literal
                for sub, pos, neg, checks in states:
                    new_states.append((sub, pos, neg + [lit], checks))
            states = new_states
            if not states:
                return
        for sub, pos, neg, checks in states:
            verdict = _run_checks([c for c in checks if not isinstance(c, BuiltinLiteral)], sub)
            if verdict is None:
                raise EvaluationError(
                    "a comparison or interval could not be evaluated; "
                    "some variable never receives a value")
            if verdict is False:
                continue
            ok = True
            for lit in checks:
                if isinstance(lit, BuiltinLiteral):
                    verdict = _builtin_holds(lit, sub)
                    if verdict is None:
                        raise EvaluationError(
                            f"comparison {pretty_print(lit)} never becomes ground")
                    if not verdict:
                        ok = False
                        break
            if not ok:
                continue
            for ground_negs in self._expand_negatives(neg, sub):
                if with_neg and neg_db is not None:
                    if any(g in neg_db for g in ground_negs):
                        continue
                    yield sub, pos, []
                else:
                    yield sub, pos, ground_negs

    def _expand_negatives(self, negs: list, sub: dict):
        """Each interval in a negative literal multiplies the instances."""
        combos: list[list[GroundLiteral]] = [[]]
        for lit in negs:
            arg_lists: list[list[Term]] = [[]]
            for arg in lit.args:
                try:
                    expanded = _expand_term(arg, sub)
                except _Unevaluable:
                    raise EvaluationError(
                        f"default-negated literal {pretty_print(lit)} keeps a "
                        "free variable; name and bind it positively") from None
                arg_lists = [c + [e] for c in arg_lists for e in expanded]
            variants = [GroundLiteral(lit.predicate, tuple(args), lit.strong_negation)
                        for args in arg_lists]
            combos = [c + [v] for c in combos for v in variants]
        return combos

    def _head_instances(self, head, sub: dict) -> list[tuple[GroundLiteral, ...]]:
        """Ground head combinations; intervals multiply whole rules."""
        combos: list[list[GroundLiteral]] = [[]]
        for lit in head:
            instances: list[GroundLiteral] = []
            arg_lists: list[list[Term]] = [[]]
            for arg in lit.args:
                try:
                    expanded = _expand_term(arg, sub)
                except _Unevaluable:
                    raise EvaluationError(
                        f"head literal {pretty_print(lit)} keeps a free "
                        "variable; anonymous variables cannot produce values") from None
                arg_lists = [c + [e] for c in arg_lists for e in expanded]
            instances = [GroundLiteral(lit.predicate, tuple(args), lit.strong_negation)
                         for args in arg_lists]
            if not instances:
                return []
            combos = [c + [i] for c in combos for i in instances]
        return [tuple(c) for c in combos]

    # -- pipeline

    def run(self) -> GroundProgram:
        problems = check_safety(self.program)
        if problems:
            names = sorted({d.message.split()[1] for d in problems})
            raise SafetyError(
                "program is unsafe; unbound variables: " + ", ".join(names))
        for rule in self.program.rules:
            _shape_check(rule)

        prepared = self._expand_conditionals(list(self.program.rules))

        # derivable base: fixpoint ignoring default negation
        changed = True
        while changed:
            changed = False
            _cancelled(self.cancel)
            for rule in prepared:
                if not rule.head:
                    continue
                for sub, _pos, _neg in self._solutions(rule.body, with_neg=False):
                    for combo in self._head_instances(rule.head, sub):
                        for atom in combo:
                            if self._add_atom(atom):
                                changed = True

        # final pass over the stable base
        seen: set[GroundRule] = set()
        rules: list[GroundRule] = []
        for rule in prepared:
            _cancelled(self.cancel)
            for sub, pos, negs in self._solutions(rule.body, with_neg=True):
                kept_negs = tuple(sorted(
                    {g for g in negs if g in self.atoms}, key=atom_key))
                body_pos = tuple(sorted(set(pos), key=atom_key))
                if set(kept_negs) & set(body_pos):
                    continue  # body can never hold
                for combo in self._head_instances(rule.head, sub):
                    ground = GroundRule(tuple(sorted(set(combo), key=atom_key)),
                                        body_pos, kept_negs)
                    if ground in seen:
                        continue
                    seen.add(ground)
                    rules.append(ground)
                    if len(rules) > self.limits.max_rules:
                        raise CapacityError(
                            f"grounding exceeded {self.limits.max_rules} rules")
        for ground in rules:
            for atom in (*ground.head, *ground.body_pos, *ground.body_neg):
                self._add_atom(atom)
        atoms = tuple(sorted(self.atoms, key=atom_key))
        rules.sort(key=GroundRule.key)
        return GroundProgram(atoms, tuple(rules))

    # -- conditional expansion

    def _expand_conditionals(self, rules: list[Rule]) -> list[_Prepared]:
        needs = [rule for rule in rules
                 if any(isinstance(b, StandardLiteral) and b.conditions
                        for b in rule.body)]
        det_db: set[GroundLiteral] = set()
        if needs:
            det_db = self._deterministic_base(rules)
        out: list[_Prepared] = []
        for rule in rules:
            body: list = []
            for lit in rule.body:
                if isinstance(lit, StandardLiteral) and lit.conditions:
                    body.extend(self._conditional_instances(rule, lit, det_db))
                else:
                    body.append(lit)
            out.append(_Prepared(rule.head, tuple(body)))
        return out

    def _deterministic_base(self, rules: list[Rule]) -> set[GroundLiteral]:
        det = _deterministic_predicates(rules)
        det_rules = [rule for rule in rules
                     if len(rule.head) == 1 and _pred_key(rule.head[0]) in det]
        saved_index, saved_atoms = self.index, self.atoms
        self.index, self.atoms = {}, set()
        changed = True
        while changed:
            changed = False
            _cancelled(self.cancel)
            for rule in det_rules:
                for sub, _pos, _neg in self._solutions(rule.body, with_neg=False):
                    for combo in self._head_instances(rule.head, sub):
                        for atom in combo:
                            if self._add_atom(atom):
                                changed = True
        db, self.index, self.atoms = self.atoms, saved_index, saved_atoms
        self._det = det
        return db

    def _conditional_instances(self, rule: Rule, lit: StandardLiteral,
                               det_db: set[GroundLiteral]) -> list[StandardLiteral]:
        for cond in lit.conditions:
            if isinstance(cond, StandardLiteral) and _pred_key(cond) not in self._det:
                raise UnsupportedConstructError(
                    f"condition over {cond.predicate}/{cond.arity} is not "
                    "evaluated internally: the predicate is not deterministic")
        outside = rule_variables(Rule(rule.head, tuple(
            b for b in rule.body if b is not lit)))
        if literal_variables(lit) & outside:
            raise UnsupportedConstructError(
                "a conditional literal sharing variables with its rule is "
                "not evaluated internally")
        saved_index, saved_atoms = self.index, self.atoms
        self.index, self.atoms = {}, set()
        for atom in det_db:
            self._add_atom(atom)
        instances: list[StandardLiteral] = []
        try:
            for sub, _pos, negs in self._solutions(lit.conditions, with_neg=True,
                                                   neg_db=self.atoms):
                del negs
                args = tuple(_eval_term(a, sub) for a in lit.args)
                ground = GroundLiteral(lit.predicate, args, lit.strong_negation)
                instances.append(StandardLiteral(
                    ground.predicate,
                    ground.args,
                    strong_negation=lit.strong_negation,
                    default_negation=lit.default_negation))
        except _Unevaluable:
            raise EvaluationError(
                f"conditional literal {pretty_print(lit)} keeps a free variable")
        finally:
            self.index, self.atoms = saved_index, saved_atoms
        uniq = []
        for inst in instances:
            if inst not in uniq:
                uniq.append(inst)
        return uniq


def _builtin_holds(lit: BuiltinLiteral, sub: dict) -> bool | None:
    try:
        left = _eval_term(lit.left, sub)
        right = _eval_term(lit.right, sub)
    except _Unevaluable:
        return None
    return _compare(lit.op, left, right)


def instantiate(program: Program, *, limits: EngineLimits = DEFAULT_LIMITS,
                cancel: CancelCheck | None = None) -> GroundProgram:
    """Ground a program over its derivable base.

    Raises SafetyError for unsafe programs and UnsupportedConstructError for
    constructs the engine does not evaluate (aggregates, head conditionals).
    """
    return _Grounder(program, limits, cancel).run()


# ---------------------------------------------------------------------------
# reduct and model checks

def reduct(ground: GroundProgram, interpretation) -> GroundProgram:
    """The program with negative bodies resolved against the interpretation."""
    true_atoms = _literal_set(interpretation)
    rules = []
    for rule in ground.rules:
        if any(a in true_atoms for a in rule.body_neg):
            continue
        rules.append(GroundRule(rule.head, rule.body_pos, ()))
    return GroundProgram(ground.atoms, tuple(rules))


def _literal_set(interpretation) -> frozenset[GroundLiteral]:
    if isinstance(interpretation, Interpretation):
        return interpretation.literals
    return frozenset(interpretation)


def _is_classical_model(ground: GroundProgram, true_atoms: frozenset) -> bool:
    for rule in ground.rules:
        if (all(a in true_atoms for a in rule.body_pos)
                and not any(a in true_atoms for a in rule.body_neg)
                and not any(a in true_atoms for a in rule.head)):
            return False
    for atom in true_atoms:
        if atom.strong_negation and atom.complement() in true_atoms:
            return False
    return True


def _definite_closure(rules: list[GroundRule],
                      universe: frozenset) -> frozenset[GroundLiteral]:
    """Least model of a definite program (single-headed, no negation)."""
    derived: set[GroundLiteral] = set()
    pending = [r for r in rules if r.head]
    changed = True
    while changed:
        changed = False
        for rule in pending:
            if rule.head[0] in derived:
                continue
            if all(a in derived for a in rule.body_pos):
                derived.add(rule.head[0])
                changed = True
    del universe
    return frozenset(derived)


def _has_smaller_model(ground: GroundProgram, true_atoms: frozenset,
                       cancel: CancelCheck | None = None) -> bool:
    """Does some proper subset of true_atoms satisfy the reduct?"""
    atoms = sorted(true_atoms, key=atom_key)
    idx = {a: i for i, a in enumerate(atoms)}
    clauses: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for rule in ground.rules:
        if any(a in true_atoms for a in rule.body_neg):
            continue
        if any(a not in true_atoms for a in rule.body_pos):
            continue  # body already false in every subset
        pos = tuple(sorted(idx[a] for a in rule.head if a in true_atoms))
        neg = tuple(sorted(idx[a] for a in rule.body_pos))
        clauses.append((pos, neg))
    clauses.append(((), tuple(range(len(atoms)))))  # drop at least one atom
    return _sat(len(atoms), clauses, cancel)


def _sat(n: int, clauses: list[tuple[tuple[int, ...], tuple[int, ...]]],
         cancel: CancelCheck | None) -> bool:
    """Plain DPLL satisfiability; clause = (atoms true, atoms false)."""
    values: list[int] = [0] * n  # 0 unknown, 1 true, -1 false

    def propagate(trail: list[int]) -> bool:
        while True:
            _cancelled(cancel)
            changed = False
            for pos, neg in clauses:
                unassigned = None
                count = 0
                satisfied = False
                for a in pos:
                    if values[a] > 0:
                        satisfied = True
                        break
                    if values[a] == 0:
                        unassigned, count = (a, 1), count + 1
                if not satisfied:
                    for a in neg:
                        if values[a] < 0:
                            satisfied = True
                            break
                        if values[a] == 0:
                            unassigned, count = (a, -1), count + 1
                if satisfied:
                    continue
                if count == 0:
                    return False
                if count == 1:
                    a, v = unassigned
                    values[a] = v
                    trail.append(a)
                    changed = True
            if not changed:
                return True

    def search() -> bool:
        trail: list[int] = []
        if not propagate(trail):
            for a in trail:
                values[a] = 0
            return False
        try:
            pick = values.index(0)
        except ValueError:
            return True  # complete, all clauses satisfied
        for v in (1, -1):
            values[pick] = v
            if search():
                return True
            values[pick] = 0
        for a in trail:
            values[a] = 0
        return False

    return search()


def is_answer_set(ground: GroundProgram, interpretation, *,
                  cancel: CancelCheck | None = None) -> bool:
    true_atoms = _literal_set(interpretation)
    if not set(true_atoms) <= set(ground.atoms):
        return False  # an atom no rule can ever support
    if not _is_classical_model(ground, true_atoms):
        return False
    red = reduct(ground, true_atoms)
    if all(len(r.head) <= 1 for r in red.rules):
        closure = _definite_closure([r for r in red.rules if r.head],
                                    frozenset(ground.atoms))
        return closure == true_atoms
    return not _has_smaller_model(ground, true_atoms, cancel)


# ---------------------------------------------------------------------------
# enumeration

class _Enumerator:
    def __init__(self, ground: GroundProgram, cancel: CancelCheck | None):
        self.ground = ground
        self.cancel = cancel
        self.atoms = list(ground.atoms)
        self.idx = {a: i for i, a in enumerate(self.atoms)}
        n = len(self.atoms)
        self.values = [0] * n
        self.results: list[tuple[tuple[int, ...], frozenset]] = []

        self.clauses: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
        self.rules_ix: list[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]] = []
        for rule in ground.rules:
            head = tuple(self.idx[a] for a in rule.head)
            pos = tuple(self.idx[a] for a in rule.body_pos)
            neg = tuple(self.idx[a] for a in rule.body_neg)
            self.clauses.append((head + neg, pos))
            self.rules_ix.append((head, pos, neg))
        for i, atom in enumerate(self.atoms):
            if atom.strong_negation:
                comp = self.idx.get(atom.complement())
                if comp is not None:
                    self.clauses.append(((), (i, comp)))

        # supports[a] = rules that can make a true on their own
        self.supports: dict[int, list[int]] = {i: [] for i in range(n)}
        for r, (head, pos, neg) in enumerate(self.rules_ix):
            for a in head:
                if a not in pos:
                    self.supports[a].append(r)

    def run(self, limit: int | None) -> list[frozenset]:
        self._search()
        self.results.sort(key=lambda item: item[0])
        models = [m for _key, m in self.results]
        if limit is not None:
            models = models[:limit]
        return models

    # -- propagation

    def _rule_live_for(self, a: int, r: int) -> bool:
        head, pos, neg = self.rules_ix[r]
        for b in pos:
            if self.values[b] < 0:
                return False
        for b in neg:
            if self.values[b] > 0:
                return False
        for h in head:
            if h != a and self.values[h] > 0:
                return False
        return True

    def _propagate(self, trail: list[int]) -> bool:
        values = self.values
        while True:
            _cancelled(self.cancel)
            changed = False
            for pos, neg in self.clauses:
                unassigned = None
                count = 0
                satisfied = False
                for a in pos:
                    if values[a] > 0:
                        satisfied = True
                        break
                    if values[a] == 0:
                        unassigned, count = (a, 1), count + 1
                if not satisfied:
                    for a in neg:
                        if values[a] < 0:
                            satisfied = True
                            break
                        if values[a] == 0:
                            unassigned, count = (a, -1), count + 1
                if satisfied:
                    continue
                if count == 0:
                    return False
                if count == 1:
                    a, v = unassigned
                    values[a] = v
                    trail.append(a)
                    changed = True
            for a in range(len(values)):
                if values[a] < 0:
                    continue
                if not any(self._rule_live_for(a, r) for r in self.supports[a]):
                    if values[a] > 0:
                        return False
                    values[a] = -1
                    trail.append(a)
                    changed = True
            if not changed:
                return True

    def _search(self) -> None:
        trail: list[int] = []
        ok = self._propagate(trail)
        if ok:
            try:
                pick = self.values.index(0)
            except ValueError:
                self._leaf()
                pick = None
            if pick is not None:
                for v in (1, -1):
                    self.values[pick] = v
                    self._search()
                    self.values[pick] = 0
        for a in trail:
            self.values[a] = 0

    def _leaf(self) -> None:
        true_atoms = frozenset(
            a for a, i in self.idx.items() if self.values[i] > 0)
        red = reduct(self.ground, true_atoms)
        if all(len(r.head) <= 1 for r in red.rules):
            closure = _definite_closure([r for r in red.rules if r.head],
                                        frozenset(self.ground.atoms))
            minimal = closure == true_atoms
        else:
            minimal = not _has_smaller_model(self.ground, true_atoms, self.cancel)
        if minimal:
            key = tuple(sorted(self.idx[a] for a in true_atoms))
            self.results.append((key, true_atoms))


def answer_sets(program: Program | GroundProgram, *, limit: int | None = None,
                limits: EngineLimits = DEFAULT_LIMITS,
                cancel: CancelCheck | None = None) -> list[Interpretation]:
    """All answer sets, sorted by their atom indices, truncated to limit.

    The full set is always enumerated before truncating; the ordering is a
    global property, so a cheap early cut would be nondeterministic.
    """
    if isinstance(program, Program):
        ground = instantiate(program, limits=limits, cancel=cancel)
    else:
        ground = program
    if len(ground.atoms) > limits.max_atoms:
        raise CapacityError(
            f"{len(ground.atoms)} atoms exceed the configured {limits.max_atoms}")
    if len(ground.rules) > limits.max_rules:
        raise CapacityError(
            f"{len(ground.rules)} rules exceed the configured {limits.max_rules}")
    models = _Enumerator(ground, cancel).run(limit)
    return [Interpretation(m) for m in models]

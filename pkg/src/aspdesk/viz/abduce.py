"""Backward route: recover an interpretation from edited scene atoms.

Guess-and-filter: the visualization rules are joined with a two-way guess
over the abducible domain, every target atom is pinned by a constraint, and
every other derivable vis atom is excluded by a ground constraint.  The
exclusions already force exact-match projections, but each candidate is
still re-checked against the target; the two routes deliberately stay
independent.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..engine import DEFAULT_LIMITS, EngineLimits, answer_sets, instantiate
from ..errors import AbductionUnsatError, VocabularyError
from ..model import (
    AggregateLiteral,
    GroundLiteral,
    Interpretation,
    Program,
    Rule,
    StandardLiteral,
    atom_key,
    fact_rule,
    standard_from_ground,
)
from .vocab import check_vis_literals, is_vis_literal


@dataclass(frozen=True)
class AbductionProblem:
    vis_program: Program
    target_vis: tuple[GroundLiteral, ...]
    abducibles: frozenset[tuple[str, int]]
    domains: Interpretation

    def __post_init__(self):
        object.__setattr__(self, "target_vis",
                           tuple(sorted(self.target_vis, key=atom_key)))
        object.__setattr__(self, "abducibles", frozenset(self.abducibles))
        if not isinstance(self.domains, Interpretation):
            object.__setattr__(self, "domains",
                               Interpretation(frozenset(self.domains)))
        for name, _arity in self.abducibles:
            if name.startswith("vis"):
                raise VocabularyError(
                    f"abducible predicate {name} overlaps the reserved "
                    f"vis vocabulary")
        check_vis_literals(self.target_vis)


def _collect_predicates(literal, names: set[str]) -> None:
    if isinstance(literal, StandardLiteral):
        names.add(literal.predicate)
        for condition in literal.conditions:
            _collect_predicates(condition, names)
    elif isinstance(literal, AggregateLiteral):
        for element in literal.elements:
            for condition in element.conditions:
                _collect_predicates(condition, names)


def _used_predicates(program: Program) -> set[str]:
    names: set[str] = set()
    for rule in program.rules:
        for literal in rule.head:
            _collect_predicates(literal, names)
        for literal in rule.body:
            _collect_predicates(literal, names)
    return names


def abduce(problem: AbductionProblem, *,
           limits: EngineLimits = DEFAULT_LIMITS,
           cancel=None) -> Interpretation:
    used = _used_predicates(problem.vis_program)
    used.update(l.predicate for l in problem.domains.literals)
    used.update(l.predicate for l in problem.target_vis)
    complement: dict[tuple[str, int], str] = {}
    for name, arity in sorted(problem.abducibles):
        fresh = name + "_off"
        while fresh in used:
            fresh += "_"
        used.add(fresh)
        complement[(name, arity)] = fresh

    rules = list(problem.vis_program.rules)
    for lit in problem.domains.sorted_literals():
        key = (lit.predicate, lit.arity)
        if key in problem.abducibles and not lit.strong_negation:
            rules.append(Rule(head=(standard_from_ground(lit),
                                    StandardLiteral(complement[key], lit.args))))
        else:
            rules.append(fact_rule(lit))
    for target in problem.target_vis:
        pin = StandardLiteral(target.predicate, target.args,
                              strong_negation=target.strong_negation,
                              default_negation=True)
        rules.append(Rule(head=(), body=(pin,)))

    base = Program(problem.vis_program.dialect, tuple(rules))
    ground = instantiate(base, limits=limits, cancel=cancel)
    target_set = set(problem.target_vis)
    exclusions = [Rule(head=(), body=(standard_from_ground(atom),))
                  for atom in ground.atoms
                  if is_vis_literal(atom) and atom not in target_set]

    full = Program(base.dialect, tuple(rules) + tuple(exclusions))
    models = answer_sets(full, limits=limits, cancel=cancel)
    for model in models:
        projection = {l for l in model.literals if is_vis_literal(l)}
        if projection != target_set:
            continue
        return Interpretation(frozenset(
            l for l in model.literals
            if (l.predicate, l.arity) in problem.abducibles))
    raise AbductionUnsatError(
        "no interpretation over the abducible domain reproduces the "
        "target scene")

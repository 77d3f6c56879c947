"""Forward route: run a visualization program over an interpretation.

The program is joined with the interpretation as facts, the first answer set
in the engine's deterministic order is taken, and its vis-vocabulary part
becomes the scene input.
"""

from __future__ import annotations

from ..engine import DEFAULT_LIMITS, EngineLimits, answer_sets
from ..errors import VisualizationUnsatError
from ..model import GroundLiteral, Interpretation, Program, atom_key, fact_rule
from .scene import Scene, build_scene
from .vocab import project_vis


def _literals(interpretation) -> list[GroundLiteral]:
    if isinstance(interpretation, Interpretation):
        return interpretation.sorted_literals()
    return sorted(interpretation, key=atom_key)


def eval_vis_program(vis_program: Program, interpretation, *,
                     limits: EngineLimits = DEFAULT_LIMITS,
                     cancel=None) -> tuple[GroundLiteral, ...]:
    facts = tuple(fact_rule(lit) for lit in _literals(interpretation))
    joined = Program(vis_program.dialect, tuple(vis_program.rules) + facts)
    models = answer_sets(joined, limit=1, limits=limits, cancel=cancel)
    if not models:
        raise VisualizationUnsatError(
            "the visualization program has no answer set over this "
            "interpretation")
    return project_vis(models[0])


def visualize(vis_program: Program, interpretation, *,
              limits: EngineLimits = DEFAULT_LIMITS, cancel=None) -> Scene:
    return build_scene(eval_vis_program(vis_program, interpretation,
                                        limits=limits, cancel=cancel))

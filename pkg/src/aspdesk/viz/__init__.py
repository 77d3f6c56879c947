"""Scene pipeline: vocabulary atoms to drawings and back again."""

from .abduce import AbductionProblem, abduce
from .edits import (
    CreateEdit,
    DeleteEdit,
    Edit,
    MoveEdit,
    RelabelEdit,
    RestyleEdit,
    apply_edit,
    apply_edits,
)
from .evaluate import eval_vis_program, visualize
from .scene import PALETTE, Scene, SceneElement, build_scene, generic_scene
from .svg import export_svg
from .vocab import (
    SCHEMAS,
    check_vis_literal,
    check_vis_literals,
    display_text,
    is_vis_literal,
    project_vis,
)

__all__ = [
    "AbductionProblem",
    "abduce",
    "CreateEdit",
    "DeleteEdit",
    "Edit",
    "MoveEdit",
    "RelabelEdit",
    "RestyleEdit",
    "apply_edit",
    "apply_edits",
    "eval_vis_program",
    "visualize",
    "PALETTE",
    "Scene",
    "SceneElement",
    "build_scene",
    "generic_scene",
    "export_svg",
    "SCHEMAS",
    "check_vis_literal",
    "check_vis_literals",
    "display_text",
    "is_vis_literal",
    "project_vis",
]

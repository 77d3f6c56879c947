from .app import create_app
from .stores import Workspace

__all__ = ["Workspace", "create_app"]

"""Workspace-scoped persistence: interpretations, scenes, tool registry.

Everything lives under one root directory so a workspace can be inspected,
versioned, or deleted as a unit. Mutations take the workspace lock; writes
go through a temp file and an atomic rename.
"""

import hashlib
import json
import os
import re
import tempfile
import threading
from pathlib import Path

from ..errors import ConflictError, FormatError, NotFoundError
from ..interpretations import from_facts, to_facts
from ..model import Interpretation
from ..toolbridge import Registry

_LABEL = re.compile(r"[A-Za-z0-9][A-Za-z0-9_.-]*\Z")
_SCENE_ID = re.compile(r"s[0-9a-f]{10}\Z")


def scene_id(scene: dict) -> str:
    digest = hashlib.sha1(
        json.dumps(scene, sort_keys=True, separators=(",", ":")).encode()).hexdigest()
    return "s" + digest[:10]


class Workspace:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.interpretations_dir = self.root / "interpretations"
        self.scenes_dir = self.root / "scenes"
        self.registry_path = self.root / "tools.ini"
        self._lock = threading.Lock()

    # -- interpretations

    def _interpretation_path(self, label: str) -> Path:
        if not _LABEL.match(label):
            raise FormatError(
                f"label {label!r} must be alphanumeric with _ . - only")
        return self.interpretations_dir / f"{label}.lp"

    def list_labels(self) -> list[str]:
        if not self.interpretations_dir.is_dir():
            return []
        return sorted(p.stem for p in self.interpretations_dir.glob("*.lp"))

    def get_interpretation(self, label: str) -> Interpretation:
        path = self._interpretation_path(label)
        if not path.exists():
            raise NotFoundError(f"no stored interpretation {label!r}")
        parsed = from_facts(path.read_text())
        return Interpretation(parsed.literals, label=label)

    def put_interpretation(self, label: str, interpretation: Interpretation,
                           *, overwrite: bool = False) -> bool:
        """Store under label; True when the store changed.

        Re-putting identical content is idempotent; different content under
        an existing label conflicts unless overwrite is set.
        """
        path = self._interpretation_path(label)
        text = to_facts(interpretation) + "\n" if interpretation.literals else ""
        with self._lock:
            if path.exists():
                if path.read_text() == text:
                    return False
                if not overwrite:
                    raise ConflictError(
                        f"label {label!r} already holds a different "
                        f"interpretation; pass overwrite to replace it")
            self._write(path, text)
        return True

    def delete_interpretation(self, label: str) -> None:
        path = self._interpretation_path(label)
        with self._lock:
            if not path.exists():
                raise NotFoundError(f"no stored interpretation {label!r}")
            path.unlink()

    # -- scenes

    def put_scene(self, scene: dict) -> str:
        sid = scene_id(scene)
        path = self.scenes_dir / f"{sid}.json"
        with self._lock:
            if not path.exists():  # content-addressed, so never conflicts
                self._write(path, json.dumps(scene, indent=1, sort_keys=True) + "\n")
        return sid

    def get_scene(self, sid: str) -> dict:
        if not _SCENE_ID.match(sid):
            raise FormatError(f"scene id {sid!r} is not of the form s<10 hex digits>")
        path = self.scenes_dir / f"{sid}.json"
        if not path.exists():
            raise NotFoundError(f"no stored scene {sid!r}")
        return json.loads(path.read_text())

    # -- tool registry

    def load_registry(self) -> Registry:
        return Registry.load(self.registry_path)

    def save_registry(self, registry: Registry) -> None:
        with self._lock:
            registry.save(self.registry_path)

    # -- plumbing

    def _write(self, path: Path, text: str) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name)
        try:
            with os.fdopen(fd, "w") as handle:
                handle.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

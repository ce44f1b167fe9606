"""File-backed project store with per-project write serialization.

Each project lives in one canonical JSON document under the store
directory. Writes go through a temp file and an atomic rename, guarded
by a per-project lock, so concurrent mutators on the same process never
interleave. Callers pass the revision they last saw; a stale revision
raises a conflict instead of silently overwriting newer state.
"""

from __future__ import annotations

import os
import re
import threading
from pathlib import Path
from typing import Optional

from .errors import ConflictError, NotFoundError, StoreError
from .model import AuditProject
from .reporting import export_project, import_project

_SAFE_ID = re.compile(r"^[A-Za-z0-9._-]+$")


class ProjectStore:
    """Directory of canonical project documents, one file per project."""

    def __init__(self, directory: Path | str):
        self.directory = Path(directory)
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StoreError(f"cannot create store directory: {exc}") from None
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock_for(self, project_id: str) -> threading.Lock:
        with self._locks_guard:
            lock = self._locks.get(project_id)
            if lock is None:
                lock = self._locks[project_id] = threading.Lock()
            return lock

    def _path_for(self, project_id: str) -> Path:
        if not _SAFE_ID.match(project_id):
            raise NotFoundError("project", project_id)
        return self.directory / f"{project_id}.json"

    def list_ids(self) -> list[str]:
        try:
            names = [p.stem for p in self.directory.glob("*.json")]
        except OSError as exc:
            raise StoreError(f"cannot list store directory: {exc}") from None
        return sorted(names)

    def load(self, project_id: str) -> AuditProject:
        path = self._path_for(project_id)
        if not path.exists():
            raise NotFoundError("project", project_id)
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise StoreError(f"cannot read {path.name}: {exc}") from None
        return import_project(data)

    def save(self, project: AuditProject,
             expected_revision: Optional[int] = None) -> None:
        """Persist a project; fails if the stored revision has moved on.

        ``expected_revision`` is the revision the caller loaded before
        mutating (mutators bump the in-memory revision themselves, so the
        stored document must still be strictly older than the one saved).
        """
        path = self._path_for(project.id)
        lock = self._lock_for(project.id)
        with lock:
            if path.exists():
                current = self.load(project.id)
                if expected_revision is not None and current.revision != expected_revision:
                    raise ConflictError(
                        f"project {project.id} is at revision {current.revision}, "
                        f"expected {expected_revision}")
                if expected_revision is None and current.revision >= project.revision:
                    raise ConflictError(
                        f"project {project.id} is at revision {current.revision}, "
                        f"not older than {project.revision}")
            elif expected_revision is not None:
                raise ConflictError(
                    f"project {project.id} does not exist yet "
                    f"(expected revision {expected_revision})")
            data = export_project(project)
            tmp = path.with_suffix(".json.tmp")
            try:
                tmp.write_bytes(data)
                os.replace(tmp, path)
            except OSError as exc:
                raise StoreError(f"cannot write {path.name}: {exc}") from None

    def create(self, project: AuditProject) -> None:
        """Persist a brand-new project; fails if the id already exists."""
        path = self._path_for(project.id)
        lock = self._lock_for(project.id)
        with lock:
            if path.exists():
                raise ConflictError(f"project {project.id} already exists")
            data = export_project(project)
            tmp = path.with_suffix(".json.tmp")
            try:
                tmp.write_bytes(data)
                os.replace(tmp, path)
            except OSError as exc:
                raise StoreError(f"cannot write {path.name}: {exc}") from None

    def delete(self, project_id: str) -> None:
        path = self._path_for(project_id)
        lock = self._lock_for(project_id)
        with lock:
            if not path.exists():
                raise NotFoundError("project", project_id)
            try:
                path.unlink()
            except OSError as exc:
                raise StoreError(f"cannot delete {path.name}: {exc}") from None

    def mutate(self, project_id: str, operation) -> AuditProject:
        """Load, apply ``operation(project)``, and save under the lock.

        The operation may return a value; it is discarded. The saved
        project is returned so callers can serialize the outcome.
        """
        lock = self._lock_for(project_id)
        with lock:
            project = self.load(project_id)
            operation(project)
            data = export_project(project)
            path = self._path_for(project_id)
            tmp = path.with_suffix(".json.tmp")
            try:
                tmp.write_bytes(data)
                os.replace(tmp, path)
            except OSError as exc:
                raise StoreError(f"cannot write {path.name}: {exc}") from None
            return project

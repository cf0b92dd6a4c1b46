"""Plain JSON file persistence: one file per entity, atomic rename on write.

The artifact is a research tool; sessions/ and results/ under a data
directory are the whole database.
"""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Optional

DATA_DIR_ENV = "SEURAT_DATA_DIR"


class DataStore:
    def __init__(self, root: Optional[str] = None):
        base = root or os.environ.get(DATA_DIR_ENV) or "./seurat-data"
        self.root = Path(base)
        self.sessions = self.root / "sessions"
        self.results = self.root / "results"
        self.sessions.mkdir(parents=True, exist_ok=True)
        self.results.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def _write_atomic(path: Path, doc: dict) -> None:
        fd, tmp = tempfile.mkstemp(dir=str(path.parent), suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(doc, fh, indent=1, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def save_session(self, doc: dict) -> None:
        self._write_atomic(self.sessions / f"{doc['id']}.json", doc)

    def load_session(self, session_id: str) -> Optional[dict]:
        path = self.sessions / f"{session_id}.json"
        if not path.exists():
            return None
        with open(path) as fh:
            return json.load(fh)

    def cache_get(self, key: str) -> Optional[dict]:
        path = self.results / f"{key}.json"
        if not path.exists():
            return None
        with open(path) as fh:
            return json.load(fh)

    def cache_put(self, key: str, doc: dict) -> None:
        self._write_atomic(self.results / f"{key}.json", doc)

"""JSON and text report files."""

import json
import logging
import os
import tempfile
from contextlib import contextmanager
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)

TIMING_FIELDS = ("wall_ms",)


def strip_timing(obj: Any) -> Any:
    """Zero every timing field so that two identical runs give identical bytes."""
    if isinstance(obj, dict):
        return {k: (0 if k in TIMING_FIELDS else strip_timing(v)) for k, v in obj.items()}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def dumps(obj: Any, timing: bool = True) -> str:
    if not timing:
        obj = strip_timing(obj)
    return json.dumps(obj, indent=2, sort_keys=True)


class ReportStore:
    def __init__(self, directory: str = "reports", timing: bool = True):
        self.directory = directory
        self.timing = timing

    def _path(self, name: str) -> str:
        return name if os.path.isabs(name) or os.path.dirname(name) else os.path.join(self.directory, name)

    @contextmanager
    def _open(self, path: str):
        """Write to a temporary file next to ``path`` and move it into place on success."""
        folder = os.path.dirname(path) or "."
        os.makedirs(folder, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=folder, prefix=".report-")
        try:
            with os.fdopen(fd, "w") as f:
                yield f
            os.replace(tmp, path)
        except Exception:
            os.unlink(tmp)
            raise

    def write_json(self, name: str, obj: Any) -> str:
        path = self._path(name)
        with self._open(path) as f:
            f.write(dumps(obj, self.timing))
            f.write("\n")
        logger.info(f"[reports] wrote {path}")
        return path

    def write_text(self, name: str, text: str) -> str:
        path = self._path(name)
        with self._open(path) as f:
            f.write(text if text.endswith("\n") else text + "\n")
        logger.info(f"[reports] wrote {path}")
        return path

    def read_json(self, name: str) -> Optional[Dict]:
        path = self._path(name)
        if not os.path.exists(path):
            return None
        with open(path) as f:
            return json.load(f)

    def list_reports(self) -> List[str]:
        if not os.path.isdir(self.directory):
            return []
        return sorted(n for n in os.listdir(self.directory) if n.endswith((".json", ".txt")))

"""A directory of dataset CSVs indexed by ``store.meta`` (JSON).

The index maps dataset id to file name, row count and SHA-256 checksum.
Files are copied in on registration; sources are never modified.
"""

from __future__ import annotations

import hashlib
import json
import re
import shutil
from pathlib import Path

from refcast.dataset import Dataset, read_dataset
from refcast.errors import DomainError

META_NAME = "store.meta"
_ID = re.compile(r"[A-Za-z0-9][A-Za-z0-9_.-]*")


def sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class DatasetStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)

    @property
    def meta_path(self) -> Path:
        return self.root / META_NAME

    def index(self) -> dict[str, dict]:
        if not self.meta_path.exists():
            return {}
        return json.loads(self.meta_path.read_text(encoding="utf-8"))["datasets"]

    def _write_index(self, index: dict[str, dict]) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        text = json.dumps({"datasets": index}, indent=2, sort_keys=True) + "\n"
        self.meta_path.write_text(text, encoding="utf-8")

    def register(self, dataset_id: str, source: str | Path, ds: Dataset | None = None) -> Path:
        if not _ID.fullmatch(dataset_id):
            raise DomainError(f"invalid dataset id {dataset_id!r}")
        source = Path(source)
        if ds is None:
            ds = read_dataset(source)
        self.root.mkdir(parents=True, exist_ok=True)
        target = self.root / f"{dataset_id}.csv"
        shutil.copyfile(source, target)
        index = self.index()
        index[dataset_id] = {
            "path": target.name,
            "rows": len(ds.records),
            "sha256": sha256_file(target),
        }
        self._write_index(index)
        return target

    def resolve(self, dataset_id: str) -> Path:
        entry = self.index().get(dataset_id)
        if entry is None:
            raise DomainError(f"dataset {dataset_id!r} not in store {self.root}")
        path = self.root / entry["path"]
        if not path.exists() or sha256_file(path) != entry["sha256"]:
            raise DomainError(f"dataset {dataset_id!r}: stored file missing or checksum mismatch")
        return path

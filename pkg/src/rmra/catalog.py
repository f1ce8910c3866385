"""Append-only JSON-Lines catalog of validated arrays with provenance.

Every record is re-validated on insert, so the catalog can never hold a
non-robust array.  Mirror-image arrays describe the same physical
design, so deduplication works on the canonical (lexicographically
smaller) orientation while records keep the positions they were given.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, TextIO

from ._version import __version__
from .coarray import SensorArray
from .errors import DomainError, RejectedRecord
from .robustness import assess

__all__ = ["CatalogRecord", "Catalog", "canonicalize", "GENERATORS", "OPTIMALITY"]

GENERATORS = ("search-optimal", "search-near-optimal", "cfe", "external")
OPTIMALITY = ("proven", "frontier", "n/a")

_FIELDS = (
    "n", "aperture", "positions", "generator", "optimality",
    "fixation", "canonical", "created_at", "tool_version",
)


def canonicalize(a: SensorArray) -> SensorArray:
    """The lexicographically smaller of an array and its mirror image."""
    m = a.mirrored()
    return a if a.positions <= m.positions else m


@dataclass(frozen=True, slots=True)
class CatalogRecord:
    """One persisted array with provenance metadata."""

    n: int
    aperture: int
    positions: tuple[int, ...]
    generator: str
    optimality: str
    fixation: str | None
    canonical: bool
    created_at: str
    tool_version: str

    @classmethod
    def build(
        cls,
        array: SensorArray,
        generator: str,
        optimality: str = "n/a",
        fixation: str | None = None,
        created_at: str | None = None,
    ) -> "CatalogRecord":
        if generator not in GENERATORS:
            raise DomainError(f"unknown generator {generator!r}")
        if optimality not in OPTIMALITY:
            raise DomainError(f"unknown optimality {optimality!r}")
        if created_at is None:
            created_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return cls(
            n=array.n,
            aperture=array.aperture,
            positions=array.positions,
            generator=generator,
            optimality=optimality,
            fixation=fixation,
            canonical=array.positions == canonicalize(array).positions,
            created_at=created_at,
            tool_version=__version__,
        )

    @property
    def array(self) -> SensorArray:
        return SensorArray(self.positions)

    def dedup_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.n, canonicalize(self.array).positions)

    def to_json(self) -> str:
        obj = {
            "n": self.n,
            "aperture": self.aperture,
            "positions": list(self.positions),
            "generator": self.generator,
            "optimality": self.optimality,
            "fixation": self.fixation,
            "canonical": self.canonical,
            "created_at": self.created_at,
            "tool_version": self.tool_version,
        }
        return json.dumps(obj, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "CatalogRecord":
        obj = json.loads(line)
        return cls(
            n=obj["n"],
            aperture=obj["aperture"],
            positions=tuple(obj["positions"]),
            generator=obj["generator"],
            optimality=obj["optimality"],
            fixation=obj["fixation"],
            canonical=obj["canonical"],
            created_at=obj["created_at"],
            tool_version=obj["tool_version"],
        )


class Catalog:
    """A JSON-Lines file of records, one per line, deduplicated.

    Writes append; duplicates (same sensor count and same canonical
    positions) are silently dropped.  Writers must be serialized by the
    caller; readers are safe at any time.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._records: list[CatalogRecord] = []
        self._index: dict[tuple[int, tuple[int, ...]], CatalogRecord] = {}
        if self.path.exists():
            for line in self.path.read_text().splitlines():
                if line.strip():
                    self._remember(CatalogRecord.from_json(line))

    def _remember(self, record: CatalogRecord) -> bool:
        key = record.dedup_key()
        if key in self._index:
            return False
        self._index[key] = record
        self._records.append(record)
        return True

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self):
        return iter(self._records)

    def insert(self, record: CatalogRecord) -> bool:
        """Validate and append; returns False on a duplicate no-op."""
        report = assess(record.array)
        if not report.is_tfrsa:
            raise RejectedRecord(
                f"array {record.array} failed robustness re-validation", report
            )
        if not self._remember(record):
            return False
        with self.path.open("a") as fh:
            fh.write(record.to_json() + "\n")
        return True

    def query(
        self,
        n: int | None = None,
        aperture: tuple[int, int] | None = None,
        generator: str | None = None,
    ) -> list[CatalogRecord]:
        """Records filtered by sensor count, aperture range and generator."""
        out = []
        for rec in self._records:
            if n is not None and rec.n != n:
                continue
            if aperture is not None and not (aperture[0] <= rec.aperture <= aperture[1]):
                continue
            if generator is not None and rec.generator != generator:
                continue
            out.append(rec)
        return out

    def compact(self) -> None:
        """Rewrite the file with exactly the deduplicated records."""
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        with tmp.open("w") as fh:
            for rec in self._records:
                fh.write(rec.to_json() + "\n")
        tmp.replace(self.path)

    @staticmethod
    def export(records: Iterable[CatalogRecord], fmt: str, out: TextIO) -> None:
        """Emit records as JSON-Lines or CSV."""
        if fmt == "jsonl":
            for rec in records:
                out.write(rec.to_json() + "\n")
        elif fmt == "csv":
            writer = csv.writer(out)
            writer.writerow(_FIELDS)
            for rec in records:
                writer.writerow([
                    rec.n,
                    rec.aperture,
                    " ".join(str(p) for p in rec.positions),
                    rec.generator,
                    rec.optimality,
                    rec.fixation if rec.fixation is not None else "",
                    rec.canonical,
                    rec.created_at,
                    rec.tool_version,
                ])
        else:
            raise DomainError(f"unknown export format {fmt!r}")

"""Fiducial files and run reports.

Fiducial file::

    # fibsic fiducial
    # d = 4
    # seed = 42
    # symmetry = [[0, 1], [1, 1]] mod 8
    # potential = 4.0000000000000002e-01
    <real> <imag>        (d lines, 17 significant digits)

Header lines start with ``#``; ``key = value`` pairs are kept as metadata.
Reports are JSON documents, see ``RunReport``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .search import SearchResult
from .verify import VerificationReport

__all__ = [
    "FiducialFileError",
    "FiducialFile",
    "format_fiducial",
    "parse_fiducial",
    "write_fiducial",
    "read_fiducial",
    "RunReport",
    "REPORT_FORMAT",
]

REPORT_FORMAT = "fibsic-report/1"


class FiducialFileError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


@dataclass
class FiducialFile:
    vector: np.ndarray
    metadata: dict[str, str] = field(default_factory=dict)

    @property
    def d(self) -> int:
        return len(self.vector)


def format_fiducial(vector: np.ndarray, metadata: dict[str, object] | None = None) -> str:
    vector = np.asarray(vector, dtype=complex)
    lines = ["# fibsic fiducial", f"# d = {len(vector)}"]
    for key, value in (metadata or {}).items():
        if key == "d":
            continue
        lines.append(f"# {key} = {value}")
    lines += [f"{z.real:.16e} {z.imag:.16e}" for z in vector]
    return "\n".join(lines) + "\n"


def parse_fiducial(text: str, renormalize: bool = True) -> FiducialFile:
    metadata: dict[str, str] = {}
    rows: list[complex] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep:
                metadata[key.strip()] = value.strip()
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FiducialFileError(f"expected two columns, got {len(parts)}", lineno)
        try:
            rows.append(complex(float(parts[0]), float(parts[1])))
        except ValueError:
            raise FiducialFileError(f"cannot parse {line!r} as two reals", lineno) from None
    if "d" in metadata:
        try:
            d = int(metadata["d"])
        except ValueError:
            raise FiducialFileError(f"bad dimension {metadata['d']!r}") from None
        if len(rows) != d:
            raise FiducialFileError(f"header says d = {d} but found {len(rows)} amplitude lines")
    if not rows:
        raise FiducialFileError("no amplitude lines")
    vector = np.array(rows, dtype=complex)
    norm = np.linalg.norm(vector)
    if abs(norm - 1) > 1e-6:
        raise FiducialFileError(f"vector norm {norm:.9g} is not within 1e-6 of 1")
    if renormalize:
        vector = vector / norm
    return FiducialFile(vector, metadata)


def write_fiducial(path: str | Path, vector: np.ndarray, metadata: dict[str, object] | None = None) -> None:
    Path(path).write_text(format_fiducial(vector, metadata))


def read_fiducial(path: str | Path) -> FiducialFile:
    return parse_fiducial(Path(path).read_text())


def _complex_pairs(v: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


@dataclass
class RunReport:
    """JSON document bundling a search result and/or a verification report.

    Schema (all keys always present, unused sections are ``null``)::

        {"format": "fibsic-report/1",
         "config": {...},                  # flags of the run
         "search": {"d", "fiducial": [[re, im], ...], "achieved_potential",
                    "welch_bound", "gap", "excess", "converged",
                    "restarts_used", "restart_index", "iterations", "seed",
                    "history": [...]},
         "verification": {VerificationReport fields; phases as [[a, b, phase], ...]}}
    """

    config: dict = field(default_factory=dict)
    search: dict | None = None
    verification: VerificationReport | None = None

    @staticmethod
    def search_section(result: SearchResult) -> dict:
        d = len(result.fiducial)
        return {
            "d": d,
            "fiducial": _complex_pairs(result.fiducial),
            "achieved_potential": result.achieved_potential,
            "welch_bound": 2.0 / (d + 1),
            "gap": result.gap,
            "excess": result.excess,
            "converged": result.converged,
            "restarts_used": result.restarts_used,
            "restart_index": result.restart_index,
            "iterations": result.iterations,
            "seed": result.seed,
            "history": [
                {k: (v.item() if isinstance(v, np.generic) else v) for k, v in h.items()}
                for h in result.history
            ],
        }

    def to_dict(self) -> dict:
        return {
            "format": REPORT_FORMAT,
            "config": self.config,
            "search": self.search,
            "verification": None if self.verification is None else self.verification.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        if data.get("format") != REPORT_FORMAT:
            raise ValueError(f"unknown report format {data.get('format')!r}")
        ver = data.get("verification")
        return cls(
            config=data.get("config") or {},
            search=data.get("search"),
            verification=None if ver is None else VerificationReport.from_dict(ver),
        )

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))

    def fiducial(self) -> np.ndarray | None:
        if self.search is None:
            return None
        return np.array([complex(re, im) for re, im in self.search["fiducial"]])

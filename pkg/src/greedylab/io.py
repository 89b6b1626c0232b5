"""Space descriptions on disk: a JSON manifest plus CSV sidecars.

Matrices are stored column-major (each CSV row is one matrix column);
vectors are single-column CSVs.  All floats are written with %.17g so a
round trip is bit-faithful.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .basis import Basis, DirectSumSpace, MappedSpace, NormedSpace, SeqSpace
from .constructions import DkkSpace, ScaleWitness
from .partition import OrderedPartition
from .seqspace import SeqNorm

_FMT = "%.17g"


def _write_matrix(path: Path, M: np.ndarray):
    np.savetxt(path, np.atleast_2d(M).T, delimiter=",", fmt=_FMT)


def _read_matrix(path: Path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", ndmin=2).T


def _write_vector(path: Path, v: np.ndarray):
    np.savetxt(path, np.asarray(v, dtype=float)[:, None], delimiter=",", fmt=_FMT)


def _read_vector(path: Path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", ndmin=1)


class _SidecarWriter:
    def __init__(self, root: Path, stem: str):
        self.root = root
        self.stem = stem
        self.count = 0

    def matrix(self, M: np.ndarray) -> str:
        self.count += 1
        name = f"{self.stem}_m{self.count:02d}.csv"
        _write_matrix(self.root / name, M)
        return name


def _space_to_json(space: NormedSpace, sc: _SidecarWriter) -> dict:
    if isinstance(space, SeqSpace):
        return {"space": "seq", "norm": space.seqnorm.to_jsonable()}
    if isinstance(space, DirectSumSpace):
        return {"space": "direct_sum",
                "left": _space_to_json(space.left, sc),
                "right": _space_to_json(space.right, sc)}
    if isinstance(space, MappedSpace):
        return {"space": "mapped", "label": space.label,
                "ambient": _space_to_json(space.ambient, sc),
                "cols": sc.matrix(space.cols)}
    if isinstance(space, DkkSpace):
        return {"space": "dkk", "host": space.host.to_jsonable(),
                "sizes": list(space.sigma.sizes),
                "inner": _basis_to_json(space.inner, sc)}
    raise TypeError(f"cannot serialize space of type {type(space).__name__}")


def _space_from_json(d: dict, root: Path) -> NormedSpace:
    kind = d["space"]
    if kind == "seq":
        return SeqSpace(SeqNorm.from_jsonable(d["norm"]))
    if kind == "direct_sum":
        return DirectSumSpace(_space_from_json(d["left"], root),
                              _space_from_json(d["right"], root))
    if kind == "mapped":
        return MappedSpace(_space_from_json(d["ambient"], root),
                           _read_matrix(root / d["cols"]),
                           label=d.get("label", "span"))
    if kind == "dkk":
        inner = _basis_from_json(d["inner"], root)
        host = SeqNorm.from_jsonable(d["host"])
        return DkkSpace(inner, host, OrderedPartition(tuple(d["sizes"])))
    raise ValueError(f"unknown space kind {kind!r}")


def _basis_to_json(b: Basis, sc: _SidecarWriter) -> dict:
    return {"space": _space_to_json(b.space, sc),
            "synth": None if b.synth is None else sc.matrix(b.synth)}


def _basis_from_json(d: dict, root: Path) -> Basis:
    space = _space_from_json(d["space"], root)
    synth = None if d["synth"] is None else _read_matrix(root / d["synth"])
    return Basis(space, synth)


def save_space(b: Basis, path: str | Path) -> Path:
    """Write a basis (space tree, synthesis matrix, scale witnesses) to a
    JSON manifest with CSV sidecars next to it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    sc = _SidecarWriter(path.parent, path.stem)
    doc = _basis_to_json(b, sc)
    doc["format_version"] = 1
    scales = b.witnesses.get("scales")
    if scales:
        rows = []
        for i, sw in enumerate(scales, start=1):
            name = f"{path.stem}_w{i:02d}.csv"
            _write_vector(path.parent / name, sw.vector)
            rows.append({"n": sw.n, "m": sw.m, "vector": name,
                         "set_a": list(sw.set_a), "set_b": list(sw.set_b),
                         "label": sw.label})
        doc["scale_witnesses"] = rows
    if "construction" in b.witnesses:
        doc["construction"] = b.witnesses["construction"]
    if "a_grid" in b.witnesses:
        doc["a_grid"] = {str(k): v for k, v in b.witnesses["a_grid"].items()}
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def load_space(path: str | Path) -> Basis:
    path = Path(path)
    doc = json.loads(path.read_text())
    b = _basis_from_json(doc, path.parent)
    if "scale_witnesses" in doc:
        scales = []
        for row in doc["scale_witnesses"]:
            scales.append(ScaleWitness(
                n=int(row["n"]), m=int(row["m"]),
                vector=_read_vector(path.parent / row["vector"]),
                set_a=tuple(row["set_a"]), set_b=tuple(row["set_b"]),
                label=row.get("label", "pair")))
        b.witnesses["scales"] = scales
    if "construction" in doc:
        b.witnesses["construction"] = doc["construction"]
    if "a_grid" in doc:
        b.witnesses["a_grid"] = {int(k): float(v)
                                 for k, v in doc["a_grid"].items()}
    return b


def load_vector(path: str | Path) -> np.ndarray:
    return _read_vector(Path(path))


def save_vector(v: np.ndarray, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    _write_vector(path, v)
    return path

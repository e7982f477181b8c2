"""Serialization support for complexes, structures and query results.

Every document is a dict with a ``type`` tag and ``format_version``. Structure documents
embed their complex so that a single file is enough to answer queries.
"""

import json
import logging
import pickle
from typing import Any, Callable, Dict, Union

import numpy as np

from rectgeo.boundary import IntervalBoundary
from rectgeo.complex import PointSpec, RectComplex, build_complex
from rectgeo.engine import GeodesicPath
from rectgeo.exceptions import (
    DeserializationError,
    SerializationFormatError,
    SerializationVersionError,
)
from rectgeo.lca import EulerLCA
from rectgeo.structures import ContractedTree, DenseMatrix, QueryStructure, TreeProduct
from rectgeo.theta import compute_theta
from rectgeo.unfolding import UnfoldedBlock, UnfoldedChain

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
FORMATS = ["json", "pickle"]

Serializable = Union[RectComplex, DenseMatrix, TreeProduct, IntervalBoundary, UnfoldedChain, GeodesicPath]


def _header(type_name: str) -> Dict[str, Any]:
    return {"type": type_name, "format_version": FORMAT_VERSION}


def _check(data: Dict[str, Any], type_name: str) -> None:
    if not isinstance(data, dict):
        raise DeserializationError(type_name, f"expected an object, got {type(data).__name__}")
    if data.get("type") != type_name:
        raise DeserializationError(type_name, f"document type is {data.get('type')!r}")
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise SerializationVersionError(version, FORMAT_VERSION)


def complex_to_dict(K: RectComplex) -> Dict[str, Any]:
    """
    Convert a RectComplex to a dictionary.

    Examples:
        >>> d = complex_to_dict(K)
        >>> d["type"], d["vertices"]
        ('RectComplex', 8)
    """
    data = _header("RectComplex")
    data.update(
        {
            "vertices": K.vertex_count,
            "edges": [[u, v, float(length)] for (u, v), length in zip(K.edges, K.lengths)],
            "faces": [list(f) for f in K.faces],
        }
    )
    return data


def _is_plain_complex(data: Any) -> bool:
    return isinstance(data, dict) and "type" not in data and "vertices" in data


def dict_to_complex(data: Dict[str, Any]) -> RectComplex:
    """
    Rebuild (and re-check) a complex from its dictionary.

    Accepts the tagged document written by :func:`complex_to_dict` and the plain complex file
    ``{"vertices": n, "edges": [[u, v], [u, v, length], ...], "faces": [[v0, v1, v2, v3], ...]}``
    with no ``type`` or ``format_version``; missing lengths default to 1.
    """
    if not _is_plain_complex(data):
        _check(data, "RectComplex")
    try:
        return build_complex(data["vertices"], data["edges"], data["faces"])
    except KeyError as exc:
        raise DeserializationError("RectComplex", f"missing key {exc}") from exc


def structure_to_dict(S: QueryStructure) -> Dict[str, Any]:
    """Convert a DenseMatrix or TreeProduct (with its complex) to a dictionary."""
    if isinstance(S, DenseMatrix):
        data = _header("DenseMatrix")
        data.update({"complex": complex_to_dict(S.complex), "D": S.D.tolist(), "L": S.L.tolist()})
        return data
    data = _header("TreeProduct")
    data.update(
        {
            "complex": complex_to_dict(S.complex),
            "trees": [
                {
                    "index": t.index,
                    "parent": list(t.parent),
                    "parent_class": list(t.parent_class),
                    "depth": t.depth.tolist(),
                }
                for t in S.trees
            ],
            "coords": S.coords.tolist(),
            "Q": [list(q) for q in S.Q],
            "Q_next": [list(q) for q in S.Q_next],
        }
    )
    return data


def _frozen(values: Any, dtype: Any) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


def dict_to_structure(data: Dict[str, Any]) -> QueryStructure:
    """Rebuild a query structure; the Θ-decomposition is recomputed from the complex."""
    kind = data.get("type") if isinstance(data, dict) else None
    if kind not in ("DenseMatrix", "TreeProduct"):
        raise DeserializationError("structure", f"unknown structure type {kind!r}")
    _check(data, kind)
    try:
        K = dict_to_complex(data["complex"])
        T = compute_theta(K)
        n = K.vertex_count
        if kind == "DenseMatrix":
            D = _frozen(data["D"], np.int32).reshape(n, n)
            L = _frozen(data["L"], np.int32).reshape(n, n, 2)
            return DenseMatrix(K, T, D, L)
        trees = []
        for t in data["trees"]:
            depth = _frozen(t["depth"], np.int64)
            trees.append(
                ContractedTree(
                    int(t["index"]),
                    tuple(t["parent"]),
                    tuple(t["parent_class"]),
                    depth,
                    EulerLCA(t["parent"], depth),
                )
            )
        coords = _frozen(data["coords"], np.int64).reshape(n, 2)
        return TreeProduct(
            K,
            T,
            (trees[0], trees[1]),
            coords,
            tuple(tuple(q) for q in data["Q"]),
            tuple(tuple(q) for q in data["Q_next"]),
        )
    except (KeyError, ValueError, IndexError) as exc:
        raise DeserializationError(kind, str(exc)) from exc


def boundary_to_dict(B: IntervalBoundary) -> Dict[str, Any]:
    data = _header("IntervalBoundary")
    data.update(B.to_dict())
    return data


def dict_to_boundary(data: Dict[str, Any]) -> IntervalBoundary:
    _check(data, "IntervalBoundary")
    try:
        return IntervalBoundary(
            int(data["p"]),
            int(data["q"]),
            tuple(data["pi1"]),
            tuple(data["pi2"]),
            {int(z): int(d) for z, d in data["deg0"].items()},
            tuple(data["articulation"]),
            tuple(data.get("steps", (0, 0))),  # type: ignore[arg-type]
            int(data.get("probes", 0)),
            int(data.get("max_probes", 0)),
            data.get("kind", "dense"),
        )
    except (KeyError, ValueError) as exc:
        raise DeserializationError("IntervalBoundary", str(exc)) from exc


def chain_to_dict(chain: UnfoldedChain) -> Dict[str, Any]:
    data = _header("UnfoldedChain")
    data.update(
        {
            "boundary": boundary_to_dict(chain.boundary),
            "blocks": [
                {
                    "index": b.index,
                    "loop": b.loop.tolist(),
                    "vertices": list(b.loop_vertices),
                    "start": b.start,
                    "end": b.end,
                    "bridge": b.bridge,
                    "turns": {str(v): kind for v, kind in sorted(b.turns.items())},
                }
                for b in chain.blocks
            ],
            "joints": [list(j) for j in chain.joints],
            "vertex_image": {str(v): list(pt) for v, pt in sorted(chain.vertex_image.items())},
            "class_direction": {
                str(c): list(d) for c, d in sorted(chain.class_direction.items())
            },
        }
    )
    return data


def dict_to_chain(data: Dict[str, Any]) -> UnfoldedChain:
    _check(data, "UnfoldedChain")
    try:
        blocks = tuple(
            UnfoldedBlock(
                int(b["index"]),
                np.asarray(b["loop"], dtype=float).reshape(-1, 2),
                tuple(b["vertices"]),
                int(b["start"]),
                int(b["end"]),
                bool(b["bridge"]),
                {int(v): kind for v, kind in b["turns"].items()},
            )
            for b in data["blocks"]
        )
        return UnfoldedChain(
            dict_to_boundary(data["boundary"]),
            blocks,
            tuple((float(x), float(y)) for x, y in data["joints"]),
            {int(v): (float(pt[0]), float(pt[1])) for v, pt in data["vertex_image"].items()},
            {int(c): (float(d[0]), float(d[1])) for c, d in data["class_direction"].items()},
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise DeserializationError("UnfoldedChain", str(exc)) from exc


def path_to_dict(path: GeodesicPath, timing: bool = False) -> Dict[str, Any]:
    """Query result document; wall-clock time is included only when asked for."""
    data = _header("GeodesicPath")
    data.update(path.to_dict(timing=timing))
    data["planar"] = [list(pt) for pt in path.planar]
    return data


def dict_to_path(data: Dict[str, Any]) -> GeodesicPath:
    _check(data, "GeodesicPath")
    try:
        breakpoints = tuple(
            int(b) if not isinstance(b, dict) else PointSpec(int(b["face"]), float(b["alpha"]), float(b["beta"]))
            for b in data["breakpoints"]
        )
        return GeodesicPath(
            breakpoints,  # type: ignore[arg-type]
            float(data["length"]),
            tuple(data.get("blocks", ())),
            (int(data["gates"][0]), int(data["gates"][1])),
            int(data.get("steps", 0)),
            float(data.get("micros", 0.0)),
            tuple((float(x), float(y)) for x, y in data.get("planar", ())),
            int(data.get("probes", 0)),
        )
    except (KeyError, ValueError, TypeError, IndexError) as exc:
        raise DeserializationError("GeodesicPath", str(exc)) from exc


_ENCODERS: Dict[type, Callable[[Any], Dict[str, Any]]] = {
    RectComplex: complex_to_dict,
    DenseMatrix: structure_to_dict,
    TreeProduct: structure_to_dict,
    IntervalBoundary: boundary_to_dict,
    UnfoldedChain: chain_to_dict,
    GeodesicPath: path_to_dict,
}

_DECODERS: Dict[str, Callable[[Dict[str, Any]], Any]] = {
    "RectComplex": dict_to_complex,
    "DenseMatrix": dict_to_structure,
    "TreeProduct": dict_to_structure,
    "IntervalBoundary": dict_to_boundary,
    "UnfoldedChain": dict_to_chain,
    "GeodesicPath": dict_to_path,
}


def to_dict(obj: Serializable) -> Dict[str, Any]:
    """Convert any supported object to its document."""
    encoder = _ENCODERS.get(type(obj))
    if encoder is None:
        raise SerializationFormatError(type(obj).__name__, sorted(_DECODERS))
    return encoder(obj)


def from_dict(data: Dict[str, Any]) -> Serializable:
    """Rebuild an object from a document, dispatching on its type tag."""
    if _is_plain_complex(data):
        return dict_to_complex(data)
    decoder = _DECODERS.get(data.get("type")) if isinstance(data, dict) else None
    if decoder is None:
        raise DeserializationError("document", f"unknown type {data.get('type') if isinstance(data, dict) else data!r}")
    return decoder(data)


class GeodesicEncoder(json.JSONEncoder):
    """
    JSON encoder for rectgeo objects and numpy values.

    Examples:
        >>> json.dumps({'complex': K, 'd': np.int64(3)}, cls=GeodesicEncoder)
    """

    def default(self, obj):
        if type(obj) in _ENCODERS:
            return to_dict(obj)
        if isinstance(obj, PointSpec):
            return {"face": obj.face_id, "alpha": obj.alpha, "beta": obj.beta}
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        return super().default(obj)


def to_json(obj: Any, **kwargs) -> str:
    """Dump a supported object (or a plain structure holding them) to JSON."""
    if type(obj) in _ENCODERS:
        obj = to_dict(obj)
    kwargs.setdefault("sort_keys", True)
    return json.dumps(obj, cls=GeodesicEncoder, **kwargs)


def from_json(text: str) -> Serializable:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DeserializationError("document", f"invalid JSON: {exc}") from exc
    return from_dict(data)


def save(obj: Serializable, filename: str, format: str = "json") -> None:
    """
    Save an object to a file.

    Args:
        obj: Complex, structure, boundary, chain or path
        filename: File path
        format: 'json' or 'pickle'
    """
    if format == "json":
        with open(filename, "w") as f:
            f.write(to_json(obj))
    elif format == "pickle":
        with open(filename, "wb") as f:
            pickle.dump(obj, f)
    else:
        raise SerializationFormatError(format, FORMATS)
    logger.debug("save() %s -> %s (%s)", type(obj).__name__, filename, format)


def load(filename: str, format: str = "json") -> Serializable:
    """Load an object saved by :func:`save`."""
    if format == "json":
        with open(filename, "r") as f:
            return from_json(f.read())
    if format == "pickle":
        with open(filename, "rb") as f:
            return pickle.load(f)
    raise SerializationFormatError(format, FORMATS)


def load_complex(filename: str) -> RectComplex:
    """Load a complex file, or the complex embedded in a structure file."""
    obj = load(filename)
    if isinstance(obj, RectComplex):
        return obj
    if isinstance(obj, (DenseMatrix, TreeProduct)):
        return obj.complex
    raise DeserializationError("RectComplex", f"{filename} holds a {type(obj).__name__}")


def load_structure(filename: str) -> QueryStructure:
    obj = load(filename)
    if not isinstance(obj, (DenseMatrix, TreeProduct)):
        raise DeserializationError("structure", f"{filename} holds a {type(obj).__name__}")
    return obj


__all__ = [
    "FORMAT_VERSION",
    "complex_to_dict",
    "dict_to_complex",
    "structure_to_dict",
    "dict_to_structure",
    "boundary_to_dict",
    "dict_to_boundary",
    "chain_to_dict",
    "dict_to_chain",
    "path_to_dict",
    "dict_to_path",
    "to_dict",
    "from_dict",
    "to_json",
    "from_json",
    "save",
    "load",
    "load_complex",
    "load_structure",
    "GeodesicEncoder",
]

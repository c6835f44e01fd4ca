"""JSON instance files: load, validate, and byte-stable serialization.

Every float is written with 17 significant digits, which round-trips
float64 exactly, so identical inputs always produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .coverage import SetSystem
from .gadgets import GadgetInstance, OrientedGraph, build_gadget
from .johnson import JohnsonInstance
from .metrics import FiniteMetric, PointSet

KINDS = (
    "points",
    "finite_metric",
    "setsystem",
    "graph",
    "vertex_sets",
    "gadget",
    "johnson",
)


class InstanceFormatError(ValueError):
    """Structurally invalid instance payload (wrong kind, shape, or field)."""


def _emit(obj) -> str:
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format(float(obj), ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_emit(x) for x in obj) + "]"
    if isinstance(obj, np.ndarray):
        return _emit(obj.tolist())
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {_emit(v)}" for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(payload: dict) -> str:
    return _emit(payload) + "\n"


def write_instance(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(payload))


@dataclass
class Loaded:
    kind: str
    payload: object
    k: Optional[int]
    raw: dict


def points_payload(ps: PointSet, k: Optional[int] = None) -> dict:
    out = {
        "kind": "points",
        "metric": ps.metric,
        "dim": ps.dim,
        "points": ps.points,
    }
    if k is not None:
        out["k"] = int(k)
    return out


def finite_metric_payload(fm: FiniteMetric, k: Optional[int] = None) -> dict:
    out = {"kind": "finite_metric", "n": len(fm), "dist": fm.dist}
    if k is not None:
        out["k"] = int(k)
    return out


def setsystem_payload(sys_: SetSystem, k: Optional[int] = None) -> dict:
    out = {"kind": "setsystem", "n": sys_.n, "sets": [list(s) for s in sys_.sets]}
    if k is not None:
        out["k"] = int(k)
    return out


def graph_payload(g: OrientedGraph) -> dict:
    return {"kind": "graph", "n": g.n, "edges": [list(a) for a in g.arcs]}


def vertex_sets_payload(sets) -> dict:
    return {"kind": "vertex_sets", "sets": [list(s) for s in sets]}


def gadget_payload(
    gadget: GadgetInstance, k: Optional[int] = None
) -> dict:
    out = {
        "kind": "gadget",
        "variant": gadget.variant,
        "n": gadget.graph.n,
        "edges": [list(a) for a in gadget.graph.arcs],
        "independent_sets": (
            None
            if gadget.independent_sets is None
            else [list(s) for s in gadget.independent_sets]
        ),
    }
    if k is not None:
        out["k"] = int(k)
    return out


def johnson_payload(inst: JohnsonInstance, k: Optional[int] = None) -> dict:
    out = {
        "kind": "johnson",
        "n": inst.n,
        "z": inst.z,
        "sets": [list(s) for s in inst.sets],
    }
    if k is not None:
        out["k"] = int(k)
    return out


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InstanceFormatError(msg)


def from_payload(raw: dict) -> Loaded:
    _require(isinstance(raw, dict), "instance must be a JSON object")
    kind = raw.get("kind")
    _require(kind in KINDS, f"unknown kind {kind!r}")
    k = raw.get("k")
    if k is not None:
        _require(isinstance(k, int) and k >= 1, "k must be a positive integer")

    if kind == "points":
        _require("points" in raw and "metric" in raw and "dim" in raw,
                 "points instance needs metric, dim, points")
        payload: object = PointSet(
            dim=int(raw["dim"]),
            points=np.asarray(raw["points"], dtype=float),
            metric=str(raw["metric"]),
        )
    elif kind == "finite_metric":
        _require("dist" in raw and "n" in raw, "finite_metric needs n and dist")
        d = np.asarray(raw["dist"], dtype=float)
        _require(d.shape == (raw["n"], raw["n"]), "dist shape must be n x n")
        payload = FiniteMetric(dist=d)
    elif kind == "setsystem":
        _require("n" in raw and "sets" in raw, "setsystem needs n and sets")
        payload = SetSystem(n=int(raw["n"]), sets=[tuple(s) for s in raw["sets"]])
    elif kind == "graph":
        _require("n" in raw and "edges" in raw, "graph needs n and edges")
        payload = OrientedGraph(
            n=int(raw["n"]), arcs=[tuple(e) for e in raw["edges"]]
        )
    elif kind == "vertex_sets":
        _require("sets" in raw, "vertex_sets needs sets")
        payload = [tuple(int(v) for v in s) for s in raw["sets"]]
    elif kind == "gadget":
        _require("n" in raw and "edges" in raw and "variant" in raw,
                 "gadget needs variant, n, edges")
        graph = OrientedGraph(n=int(raw["n"]), arcs=[tuple(e) for e in raw["edges"]])
        g = build_gadget(graph, str(raw["variant"]))
        if raw.get("independent_sets") is not None:
            g.independent_sets = [tuple(int(v) for v in s) for s in raw["independent_sets"]]
        payload = g
    else:  # johnson
        _require("n" in raw and "z" in raw and "sets" in raw,
                 "johnson needs n, z, sets")
        payload = JohnsonInstance(
            n=int(raw["n"]),
            z=int(raw["z"]),
            sets=[tuple(int(v) for v in s) for s in raw["sets"]],
        )
    return Loaded(kind=kind, payload=payload, k=k, raw=raw)


def load_instance(path: str) -> Loaded:
    """Parse and validate an instance file.

    json.JSONDecodeError (with line and column) propagates on malformed
    JSON; InstanceFormatError on well-formed JSON with bad structure.
    """
    with open(path) as fh:
        raw = json.load(fh)
    return from_payload(raw)

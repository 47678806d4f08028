"""JSON serialization for matrices, instruments, dilations and classical data.

Matrix format::

    {"dim": n, "re": [[...]], "im": [[...]],
     "layout": "canonical" | "ancilla-outer", "dims": [dH, dK]}

``layout`` and ``dims`` are optional; ``ancilla-outer`` matrices are permuted
to canonical order on load.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .classical import ConditionalMap, FiniteDistribution, Partition
from .dilation import DilationSpec
from .errors import ShapeMismatch
from .instruments import Instrument, QuantumOperation, maxwell_instrument
from .linalg import ANCILLA_OUTER, CANONICAL, as_matrix, reorder_layout


def matrix_to_json(m, layout: str = CANONICAL, dims=None) -> dict:
    m = as_matrix(m)
    if layout == ANCILLA_OUTER:
        m = reorder_layout(m, dims, source=CANONICAL)
    out = {"dim": m.shape[0], "re": m.real.tolist(), "im": m.imag.tolist()}
    if dims is not None:
        out["layout"] = layout
        out["dims"] = [int(d) for d in dims]
    return out


def matrix_from_json(obj: dict) -> np.ndarray:
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    m = as_matrix(re + 1j * im)
    if "dim" in obj and int(obj["dim"]) != m.shape[0]:
        raise ShapeMismatch(f"declared dim {obj['dim']} but matrix is {m.shape[0]}x{m.shape[0]}")
    layout = obj.get("layout", CANONICAL)
    if layout == ANCILLA_OUTER:
        if "dims" not in obj:
            raise ShapeMismatch("ancilla-outer layout requires 'dims'")
        m = reorder_layout(m, obj["dims"], source=ANCILLA_OUTER)
    elif layout != CANONICAL:
        raise ValueError(f"unknown layout {layout!r}")
    return m


def instrument_to_json(instr: Instrument) -> dict:
    return {"outcomes": [
        {"label": label, "kraus": [matrix_to_json(a) for a in op.kraus]}
        for label, op in zip(instr.labels, instr.ops)
    ]}


def instrument_from_json(obj: dict) -> Instrument:
    """Accepts the Kraus form or the ``{"projectors", "unitaries"}`` shorthand."""
    if "projectors" in obj:
        ps = [matrix_from_json(m) for m in obj["projectors"]]
        us = [matrix_from_json(m) for m in obj["unitaries"]]
        return maxwell_instrument(ps, us)
    outcomes = obj["outcomes"]
    ops = [QuantumOperation(tuple(matrix_from_json(m) for m in o["kraus"])) for o in outcomes]
    labels = [o.get("label", n) for n, o in enumerate(outcomes)]
    return Instrument(tuple(ops), tuple(labels))


def dilation_to_json(spec: DilationSpec, layout: str = CANONICAL) -> dict:
    return {
        "objectDim": spec.object_dim,
        "ancillaDim": spec.ancilla_dim,
        "phiIndex": spec.phi_index,
        "v": matrix_to_json(spec.v, layout=layout, dims=spec.dims),
        "q": [matrix_to_json(q) for q in spec.q],
        "layout": layout,
    }


def dilation_from_json(obj: dict) -> DilationSpec:
    dims = [int(obj["objectDim"]), int(obj["ancillaDim"])]
    vobj = dict(obj["v"])
    vobj.setdefault("layout", obj.get("layout", CANONICAL))
    vobj.setdefault("dims", dims)
    return DilationSpec(
        object_dim=dims[0], ancilla_dim=dims[1], phi_index=int(obj.get("phiIndex", 0)),
        v=matrix_from_json(vobj), q=[matrix_from_json(q) for q in obj["q"]],
    )


def distribution_to_json(p: FiniteDistribution) -> dict:
    return {"p": [float(x) for x in p.p]}


def distribution_from_json(obj: dict) -> FiniteDistribution:
    return FiniteDistribution(obj["p"])


def classical_from_json(obj: dict):
    """``{"p", "blocks", "phi", "j0"}`` -> ``(distribution, conditional map, j0)``."""
    cm = ConditionalMap(tuple(obj["phi"]), Partition(tuple(obj["blocks"])))
    return FiniteDistribution(obj["p"]), cm, int(obj.get("j0", 0))


def classical_to_json(p: FiniteDistribution, cm: ConditionalMap, j0: int = 0) -> dict:
    return {"p": [float(x) for x in p.p], "blocks": [list(b) for b in cm.partition.blocks],
            "phi": list(cm.phi), "j0": j0}


def load_json(path) -> dict:
    return json.loads(Path(path).read_text())


def dump_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")

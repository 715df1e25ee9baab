"""Bit-exact JSON formats for every object the CLI touches.

Complex entries are [re, im] pairs; floats print with 17 significant
digits so payloads round-trip exactly and byte-identically; exact
cocycle exponents stay integers. A "group" field may be an inline object
or a path string resolved relative to the referencing file.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .cohomology import Cocycle, make_cocycle
from .groups import FiniteGroup, OnsiteRep, validate_group, validate_onsite_rep
from .mps import MpsState, SymmetryCertificate, canonicalize
from .twisted import TwistedElement, make_element, make_window


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, floats at 17 significant digits."""
    out = []
    _emit(obj, out)
    return "".join(out)


def _emit(obj, out):
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not np.isfinite(x):
            raise ValueError("cannot serialize non-finite float")
        out.append(format(x, ".17g"))
    elif isinstance(obj, complex):
        _emit([obj.real, obj.imag], out)
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        first = True
        for k in sorted(obj, key=str):
            if not first:
                out.append(",")
            first = False
            out.append(json.dumps(str(k)))
            out.append(":")
            _emit(obj[k], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, x in enumerate(obj):
            if i:
                out.append(",")
            _emit(x, out)
        out.append("]")
    elif isinstance(obj, np.ndarray):
        _emit(obj.tolist(), out)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def json_to_matrix(data) -> np.ndarray:
    return np.array(
        [[complex(entry[0], entry[1]) for entry in row] for row in data], dtype=complex
    )


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _resolve_group(data, base_dir: str) -> FiniteGroup:
    if isinstance(data, str):
        path = data if os.path.isabs(data) else os.path.join(base_dir, data)
        data = _load_json(path)
    return validate_group(data["table"], names=data.get("names"))


def group_to_json(g: FiniteGroup) -> dict:
    out = {"order": g.order, "table": [list(r) for r in g.table]}
    if g.names is not None:
        out["names"] = list(g.names)
    return out


def load_group(path: str) -> FiniteGroup:
    return _resolve_group(_load_json(path), os.path.dirname(os.path.abspath(path)))


def onsite_rep_to_json(u: OnsiteRep, inline_group: bool = True) -> dict:
    return {
        "group": group_to_json(u.group),
        "dim": u.dim,
        "matrices": [matrix_to_json(m) for m in u.matrices],
    }


def load_onsite_rep(path: str) -> OnsiteRep:
    data = _load_json(path)
    grp = _resolve_group(data["group"], os.path.dirname(os.path.abspath(path)))
    mats = [json_to_matrix(m) for m in data["matrices"]]
    return validate_onsite_rep(grp, mats)


def cocycle_to_json(c: Cocycle) -> dict:
    out = {"group": group_to_json(c.group)}
    if c.is_exact:
        out["m"] = c.root_order
        out["exponents"] = [list(r) for r in c.exponents]
    else:
        out["phases"] = [list(r) for r in c.phases]
    return out


def load_cocycle(path: str) -> Cocycle:
    data = _load_json(path)
    grp = _resolve_group(data["group"], os.path.dirname(os.path.abspath(path)))
    if "exponents" in data:
        return make_cocycle(grp, root_order=int(data["m"]), exponents=data["exponents"])
    return make_cocycle(grp, phases=data["phases"])


def mps_to_json(s: MpsState) -> dict:
    return {
        "phys_dim": s.phys_dim,
        "bond_dim": s.bond_dim,
        "tensors": [matrix_to_json(t) for t in s.tensors],
    }


def load_mps(path: str) -> MpsState:
    data = _load_json(path)
    tensors = [json_to_matrix(t) for t in data["tensors"]]
    return canonicalize(tensors)


def certificate_to_json(cert: SymmetryCertificate) -> dict:
    return {
        "group_order": cert.group_order,
        "thetas_turns": list(cert.thetas),
        "cocycle": cocycle_to_json(cert.cocycle),
        "snap_displacement": cert.snap_displacement,
        "bond_rep": [matrix_to_json(v) for v in cert.bond_rep],
    }


def twisted_element_to_json(f: TwistedElement) -> dict:
    return {
        "window": list(f.window.sites),
        "local_dim": f.window.local_dim,
        "cocycle": cocycle_to_json(f.cocycle),
        "values": {str(g): matrix_to_json(v) for g, v in enumerate(f.values)},
    }


def load_twisted_element(path: str, onsite: OnsiteRep) -> TwistedElement:
    data = _load_json(path)
    base = os.path.dirname(os.path.abspath(path))
    grp = _resolve_group(data["cocycle"]["group"], base)
    cdata = data["cocycle"]
    if "exponents" in cdata:
        c = make_cocycle(grp, root_order=int(cdata["m"]), exponents=cdata["exponents"])
    else:
        c = make_cocycle(grp, phases=cdata["phases"])
    values = [json_to_matrix(data["values"][str(g)]) for g in range(grp.order)]
    local_dim = data.get("local_dim")
    if local_dim is None:
        size = values[0].shape[0]
        nsites = len(data["window"])
        local_dim = round(size ** (1.0 / nsites))
    window = make_window(data["window"], int(local_dim))
    return make_element(window, c, onsite, values)

"""JSON interchange: exact scalars, sparse tensors, Hopf algebras, group
scheme build specs, subgroup specs, and triples.

Scalars serialize as decimal strings (prime fields), coefficient arrays
(extension fields), or "num/den" strings (rationals).  Sparse tensors are
arrays of {"indices": [...], "value": ...} records, sorted by indices, so
emitted documents are canonical and diffable.
"""

from __future__ import annotations

import json

from .errors import SchemaError
from .fields import Field, make_field
from .hopf import HopfAlgebra, LinMap
from .groupschemes import (
    GroupScheme,
    SubgroupScheme,
    constant_group,
    direct_product,
    full_subgroup,
    ga_frobenius_subgroup,
    ga_kernel,
    mu_p_kernel,
    restricted_enveloping,
    subgroup_from_generators,
    trivial_subgroup,
)

SCHEMA_VERSION = 1


def scalar_to_json(F: Field, v):
    if F.kind == "extension":
        return list(v)
    return F.to_str(v)


def scalar_from_json(F: Field, data):
    try:
        if F.kind == "extension":
            return tuple(int(c) % F.char for c in data)
        return F.from_str(str(data))
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"bad scalar {data!r}: {exc}")


def field_to_json(F: Field):
    return F.describe()

def field_from_json(data) -> Field:
    try:
        kind = data["kind"]
        if kind == "prime":
            return make_field("prime", p=int(data["p"]))
        if kind == "extension":
            return make_field("extension", p=int(data["p"]), k=int(data["k"]),
                              poly=data.get("poly"))
        if kind == "rationals":
            return make_field("rationals")
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad field spec: {exc}")
    raise SchemaError(f"unknown field kind {data!r}")


def tensor_to_json(F: Field, entries):
    """entries: dict mapping index tuples (or ints) to scalars."""
    out = []
    for key in sorted(entries, key=lambda k: (k,) if isinstance(k, int) else k):
        idx = [key] if isinstance(key, int) else list(key)
        out.append({"indices": idx, "value": scalar_to_json(F, entries[key])})
    return out


def tensor_from_json(F: Field, data, arity):
    out = {}
    if not isinstance(data, list):
        raise SchemaError("sparse tensor must be a list of records")
    for rec in data:
        try:
            idx = rec["indices"]
            val = scalar_from_json(F, rec["value"])
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad tensor record {rec!r}: {exc}")
        if len(idx) != arity:
            raise SchemaError(f"expected {arity} indices, got {idx}")
        if val != F.zero():
            key = idx[0] if arity == 1 else tuple(idx)
            out[key] = val
    return out


def hopf_to_json(H: HopfAlgebra):
    F = H.field
    mult = {}
    for (i, j), cell in H.mult.items():
        for k, c in cell.items():
            mult[(i, j, k)] = c
    comult = {}
    for i, t in H.comult.items():
        for (j, k), c in t.items():
            comult[(i, j, k)] = c
    antipode = {}
    for j, col in H.antipode.items():
        for i, c in col.items():
            antipode[(i, j)] = c
    return {
        "schema_version": SCHEMA_VERSION,
        "field": field_to_json(F),
        "dim": H.dim,
        "labels": list(H.labels),
        "mult": tensor_to_json(F, mult),
        "unit": tensor_to_json(F, H.unit),
        "comult": tensor_to_json(F, comult),
        "counit": tensor_to_json(F, H.counit),
        "antipode": tensor_to_json(F, antipode),
        "name": H.name,
    }


def hopf_from_json(data) -> HopfAlgebra:
    try:
        F = field_from_json(data["field"])
        dim = int(data["dim"])
        labels = list(data["labels"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad hopf document: {exc}")
    if len(labels) != dim:
        raise SchemaError("label count differs from dim")
    mult3 = tensor_from_json(F, data.get("mult", []), 3)
    mult = {}
    for (i, j, k), c in mult3.items():
        mult.setdefault((i, j), {})[k] = c
    comult3 = tensor_from_json(F, data.get("comult", []), 3)
    comult = {i: {} for i in range(dim)}
    for (i, j, k), c in comult3.items():
        comult[i][(j, k)] = c
    anti2 = tensor_from_json(F, data.get("antipode", []), 2)
    antipode = {}
    for (i, j), c in anti2.items():
        antipode.setdefault(j, {})[i] = c
    return HopfAlgebra(
        F, labels, mult,
        tensor_from_json(F, data.get("unit", []), 1),
        comult,
        tensor_from_json(F, data.get("counit", []), 1),
        antipode,
        name=data.get("name", ""),
    )


def linmap_to_json(F: Field, m: LinMap):
    entries = {}
    for j, col in m.mat.items():
        for i, c in col.items():
            entries[(i, j)] = c
    return tensor_to_json(F, entries)


def matrix_from_json(F: Field, data):
    ent = tensor_from_json(F, data, 2)
    mat = {}
    for (i, j), c in ent.items():
        mat.setdefault(j, {})[i] = c
    return mat


def group_from_spec(spec, F: Field) -> GroupScheme:
    """Build a group scheme from its JSON build spec."""
    if not isinstance(spec, dict) or len(spec) != 1:
        raise SchemaError("group spec must have exactly one constructor key")
    kind, body = next(iter(spec.items()))
    if kind == "constant":
        try:
            return constant_group(body["elements"], body["table"], F,
                                  name=body.get("name", ""))
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad constant spec: {exc}")
    if kind == "ga_kernel":
        try:
            return ga_kernel(int(body["r"]), F)
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad ga_kernel spec: {exc}")
    if kind == "mu_p":
        return mu_p_kernel(F)
    if kind == "product":
        if not isinstance(body, list) or len(body) != 2:
            raise SchemaError("product spec needs two factors")
        return direct_product(group_from_spec(body[0], F),
                              group_from_spec(body[1], F))
    if kind == "restricted_lie":
        try:
            n = int(body["dim"])
            bracket = [[{int(g): c for g, c in cell.items()}
                        for cell in row] for row in body["bracket"]]
            p_map = [{int(g): c for g, c in cell.items()} for cell in body["p_map"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad restricted_lie spec: {exc}")
        return restricted_enveloping(n, bracket, p_map, F,
                                     name=body.get("name", ""))
    raise SchemaError(f"unknown group constructor {kind!r}")


def subgroup_from_spec(G: GroupScheme, spec) -> SubgroupScheme:
    if spec == "trivial" or spec == {"trivial": {}}:
        return trivial_subgroup(G)
    if spec == "full" or spec == {"full": {}}:
        return full_subgroup(G)
    if isinstance(spec, dict) and "frobenius_sub" in spec:
        body = spec["frobenius_sub"]
        r = body["r"] if isinstance(body, dict) else body
        return ga_frobenius_subgroup(G, int(r))
    if isinstance(spec, dict) and "generators" in spec:
        F = G.field
        gens = [tensor_from_json(F, g, 1) for g in spec["generators"]]
        return subgroup_from_generators(G, gens)
    raise SchemaError(f"unknown subgroup spec {spec!r}")


def report_to_json(rep):
    return rep.as_dict()


def dump(data, path=None):
    text = json.dumps(data, indent=1, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


def load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}")

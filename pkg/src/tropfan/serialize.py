"""JSON forms of matroids, fans and realization matrices.

Matroid:      {"n_elements": 7, "rank": 3, "bases": [[0, 1, 3], ...]}
              or the same with "nonbases" instead of "bases" (exactly one).
Fan:          {"ambient_rank": 6, "rays": [[...], ...], "cones": [{"rays": [0, 7], "weight": 1}, ...]}
              rays are full-length representatives, canonicalized on load;
              cones are the maximal cones only.
Realization:  {"field": {"prime": 2} | "Q", "rows": 3, "cols": 7, "entries": [[...], ...]}
              rational entries may be ints or "a/b" strings.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from .exactalg import GF, QQ, Matrix, PrimeField
from .fan import Cone, QuotientVector, WeightedFan
from .matroid import Matroid, elements, matroid_from_bases, matroid_from_nonbases
from .realization import GaugeClass, RealizationMatrix


class SchemaError(ValueError):
    pass


def _require(obj: dict, *keys):
    if not isinstance(obj, dict):
        raise SchemaError("expected a JSON object")
    for k in keys:
        if k not in obj:
            raise SchemaError(f"missing key {k!r}")


# --- matroids ---------------------------------------------------------------

def matroid_to_json(M: Matroid) -> dict:
    return {"n_elements": M.n_elements, "rank": M.rank, "bases": [list(b) for b in M.sorted_bases()]}


def matroid_from_json(obj: dict) -> Matroid:
    _require(obj, "n_elements")
    has_b, has_nb = "bases" in obj, "nonbases" in obj
    if has_b == has_nb:
        raise SchemaError("exactly one of 'bases' and 'nonbases' is required")
    n = obj["n_elements"]
    if has_b:
        M = matroid_from_bases(n, obj["bases"])
        if "rank" in obj and obj["rank"] != M.rank:
            raise SchemaError(f"declared rank {obj['rank']} but bases have size {M.rank}")
        return M
    _require(obj, "rank")
    return matroid_from_nonbases(n, obj["rank"], obj["nonbases"])


# --- fans -------------------------------------------------------------------

def fan_to_json(F: WeightedFan) -> dict:
    return {
        "ambient_rank": F.ambient_rank,
        "rays": [list(r.coords) for r in F.rays],
        "cones": [{"rays": list(c.ray_indices), "weight": w} for c, w in zip(F.maximal_cones, F.weights)],
    }


def fan_from_json(obj: dict) -> WeightedFan:
    _require(obj, "ambient_rank", "rays", "cones")
    n = obj["ambient_rank"]
    rays = []
    for r in obj["rays"]:
        if len(r) != n + 1:
            raise SchemaError(f"ray {r} should have {n + 1} coordinates")
        rays.append(QuotientVector.of(int(x) for x in r))
    cones, weights = [], []
    for c in obj["cones"]:
        _require(c, "rays")
        cones.append(Cone(tuple(sorted(int(i) for i in c["rays"]))))
        weights.append(c.get("weight", 1))
    return WeightedFan(n, tuple(rays), tuple(cones), tuple(weights))


def ray_flats_to_json(ray_flats) -> dict:
    return {"ray_flats": [list(elements(f)) for f in ray_flats]}


# --- realizations -----------------------------------------------------------

def _scalar_out(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x


def realization_to_json(A: Matrix) -> dict:
    field: Any = {"prime": A.field.p} if isinstance(A.field, PrimeField) else "Q"
    return {
        "field": field,
        "rows": A.nrows,
        "cols": A.ncols,
        "entries": [[_scalar_out(x) for x in r] for r in A.rows],
    }


def realization_from_json(obj: dict) -> RealizationMatrix:
    _require(obj, "field", "entries")
    f = obj["field"]
    if f == "Q":
        field = QQ
        conv = Fraction
    elif isinstance(f, dict) and "prime" in f:
        field = GF(int(f["prime"]))
        conv = lambda x: Fraction(x) if isinstance(x, str) else x
    else:
        raise SchemaError(f"unknown field {f!r}")
    entries = [[conv(x) for x in r] for r in obj["entries"]]
    if "rows" in obj and obj["rows"] != len(entries):
        raise SchemaError("row count mismatch")
    if "cols" in obj and any(len(r) != obj["cols"] for r in entries):
        raise SchemaError("column count mismatch")
    return RealizationMatrix.of(field, entries)


def classes_to_json(classes: list[GaugeClass]) -> dict:
    return {
        "gauge_basis": list(classes[0].base_basis) if classes else None,
        "classes": [realization_to_json(c.matrix) for c in classes],
    }


# --- files ------------------------------------------------------------------

def load(path: Union[str, Path]) -> Any:
    with open(path) as fh:
        return json.load(fh)


def dump(obj: Any, path: Union[str, Path]):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")

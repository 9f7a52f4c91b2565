"""JSON manifold specs <-> AlgebraModel.

Files use 1-based frame indices and carry rationals as strings (``"1/2"``);
bracket values are polynomial strings over the declared parameters.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any

from .errors import PolyParseError, StructureError
from .manifold import AlgebraModel, _invert
from .scalar import format_rational, parse_poly, to_rational

_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class SpecError(StructureError):
    """A manifold spec is malformed; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _rational(value: Any, field: str):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise SpecError(field, f"expected a rational string, got {value!r}")
    try:
        return to_rational(str(value))
    except StructureError as exc:
        raise SpecError(field, str(exc)) from None


def _matrix(data: dict, key: str, dim: int):
    rows = data.get(key)
    if not isinstance(rows, list) or len(rows) != dim:
        raise SpecError(key, f"expected {dim} rows")
    out = []
    for a, row in enumerate(rows, 1):
        if not isinstance(row, list) or len(row) != dim:
            raise SpecError(f"{key}[{a}]", f"expected {dim} entries")
        out.append([_rational(v, f"{key}[{a}][{b}]") for b, v in enumerate(row, 1)])
    return out


def _vector(data: dict, key: str, dim: int):
    vec = data.get(key)
    if not isinstance(vec, list) or len(vec) != dim:
        raise SpecError(key, f"expected {dim} entries")
    return [_rational(v, f"{key}[{a}]") for a, v in enumerate(vec, 1)]


def model_from_spec(data: Any) -> AlgebraModel:
    if not isinstance(data, dict):
        raise SpecError("<root>", "expected a JSON object")
    dim = data.get("dimension")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1 or dim % 2 == 0:
        raise SpecError("dimension", f"expected an odd positive integer, got {dim!r}")
    params = data.get("parameters", [])
    if not isinstance(params, list):
        raise SpecError("parameters", "expected a list of identifiers")
    for a, p in enumerate(params, 1):
        if not isinstance(p, str) or not _IDENT.fullmatch(p):
            raise SpecError(f"parameters[{a}]", f"not an identifier: {p!r}")
    if len(set(params)) != len(params):
        raise SpecError("parameters", "duplicate parameter names")

    metric = _matrix(data, "metric", dim)
    for a in range(dim):
        for b in range(a + 1, dim):
            if metric[a][b] != metric[b][a]:
                raise SpecError(f"metric[{a + 1}][{b + 1}]",
                                f"metric is not symmetric: {metric[a][b]} vs metric[{b + 1}][{a + 1}] = {metric[b][a]}")
    try:
        _invert(metric)
    except StructureError:
        raise SpecError("metric", "metric is not invertible") from None
    phi = _matrix(data, "phi", dim)
    xi = _vector(data, "xi", dim)
    eta = _vector(data, "eta", dim)

    brackets: dict[tuple[int, int], dict[int, Any]] = {}
    entries = data.get("brackets", [])
    if not isinstance(entries, list):
        raise SpecError("brackets", "expected a list")
    seen: dict[tuple[int, int, int], Any] = {}
    for a, entry in enumerate(entries, 1):
        field = f"brackets[{a}]"
        if not isinstance(entry, dict):
            raise SpecError(field, "expected an object with i, j, k, value")
        idx = []
        for key in ("i", "j", "k"):
            v = entry.get(key)
            if isinstance(v, bool) or not isinstance(v, int) or not 1 <= v <= dim:
                raise SpecError(f"{field}.{key}", f"expected an index in 1..{dim}, got {v!r}")
            idx.append(v - 1)
        i, j, k = idx
        if i == j:
            raise SpecError(field, "bracket of a basis vector with itself must vanish")
        text = entry.get("value")
        if not isinstance(text, str):
            raise SpecError(f"{field}.value", "expected a polynomial string")
        try:
            value = parse_poly(text, params)
        except PolyParseError as exc:
            raise SpecError(f"{field}.value", str(exc)) from None
        for key, v in (((i, j, k), value), ((j, i, k), -value)):
            if key in seen and seen[key] != v:
                raise SpecError(field, f"conflicts with an earlier entry for [e{key[0] + 1}, e{key[1] + 1}]")
            seen[key] = v
        brackets.setdefault((i, j), {})[k] = value
    return AlgebraModel.from_data(dim // 2, params, brackets, metric, phi, xi, eta)


def load_spec(path: str | Path) -> AlgebraModel:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SpecError("<json>", f"malformed JSON: {exc}") from None
    except OSError as exc:
        raise SpecError("<input>", str(exc)) from None
    return model_from_spec(data)


def model_to_spec(m: AlgebraModel) -> dict:
    d = m.dim
    brackets = []
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(d):
                v = m.c[k, i, j]
                if v:
                    brackets.append({"i": i + 1, "j": j + 1, "k": k + 1, "value": v.render()})

    def rat(p):
        return format_rational(p.constant_value())

    return {
        "dimension": d,
        "parameters": list(m.params),
        "brackets": brackets,
        "metric": [[rat(m.g[a, b]) for b in range(d)] for a in range(d)],
        "phi": [[rat(m.phi[a, b]) for b in range(d)] for a in range(d)],
        "xi": [rat(m.xi[a]) for a in range(d)],
        "eta": [rat(m.eta[a]) for a in range(d)],
    }

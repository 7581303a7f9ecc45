"""Reading and writing curvature tensors as CTJ ("ctj-1") JSON documents."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model_spaces import ComplexStructure
from .tensor_core import (
    BIANCHI_TOL,
    AlgebraicCurvatureTensor,
    ValidationError,
    act_from_components,
    check_bianchi,
)

FORMAT = "ctj-1"


class CtjFormatError(ValueError):
    """The document is not well-formed ctj-1."""


@dataclass(frozen=True, eq=False)
class CtjDocument:
    R: AlgebraicCurvatureTensor
    J: ComplexStructure | None = None
    metadata: dict = field(default_factory=dict)


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def dumps(R: AlgebraicCurvatureTensor, J: ComplexStructure | None = None,
          metadata: dict | None = None) -> str:
    """Serialize with canonical slots in lexicographic order and shortest-repr floats.

    The output depends only on the component bits, so equal tensors give
    byte-identical documents.
    """
    def enc(x):
        return json.dumps(x, allow_nan=False)

    lines = ["{", f' "format": {enc(FORMAT)},', f' "n": {R.n},',
             f' "metadata": {json.dumps(metadata or {}, sort_keys=True, allow_nan=False)},']
    if J is not None:
        rows = [enc([float(x) for x in row]) for row in J.J]
        lines.append(' "J": [\n  ' + ",\n  ".join(rows) + "\n ],")
    comps = [enc({"i": i, "j": j, "k": k, "l": l, "v": v}) for i, j, k, l, v in R.canonical_entries()]
    lines.append(' "components": [' + ("\n  " + ",\n  ".join(comps) + "\n ]" if comps else "]"))
    return "\n".join(lines) + "\n}\n"


def write(path, R, J=None, metadata=None) -> str:
    """Write a CTJ file and return its digest."""
    data = dumps(R, J, metadata).encode()
    Path(path).write_bytes(data)
    return digest(data)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise CtjFormatError(message)


def _number(x, what: str) -> float:
    _require(isinstance(x, (int, float)) and not isinstance(x, bool), f"{what} must be a number")
    _require(math.isfinite(x), f"{what} must be finite")
    return float(x)


def _index(x, what: str) -> int:
    _require(isinstance(x, int) and not isinstance(x, bool), f"{what} must be an integer")
    return x


def loads(text: str | bytes, bianchi_tol: float = BIANCHI_TOL) -> CtjDocument:
    """Parse and validate a ctj-1 document.

    Structural problems raise ``CtjFormatError``; a Bianchi defect above
    ``bianchi_tol * ||R||_inf`` or an invalid ``J`` raises ``ValidationError``.
    """
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CtjFormatError(f"not valid JSON: {exc}") from None
    _require(isinstance(doc, dict), "top level must be an object")
    _require(doc.get("format") == FORMAT, f"format must be {FORMAT!r}")
    _require("n" in doc and "components" in doc, "missing 'n' or 'components'")
    n = _index(doc["n"], "n")
    comps = doc["components"]
    _require(isinstance(comps, list), "'components' must be a list")
    entries = []
    for pos, c in enumerate(comps):
        _require(isinstance(c, dict) and set(c) == {"i", "j", "k", "l", "v"},
                 f"component {pos} must have exactly the keys i, j, k, l, v")
        entries.append((*(_index(c[key], f"component {pos} index {key}") for key in "ijkl"),
                        _number(c["v"], f"component {pos} value")))
    metadata = doc.get("metadata", {})
    _require(isinstance(metadata, dict), "'metadata' must be an object")
    try:
        R = act_from_components(n, entries, validate=False)
    except (ValueError, IndexError) as exc:
        raise CtjFormatError(str(exc)) from None
    check_bianchi(R, bianchi_tol)

    J = None
    if "J" in doc:
        raw = doc["J"]
        _require(isinstance(raw, list) and len(raw) == n
                 and all(isinstance(row, list) and len(row) == n for row in raw),
                 f"'J' must be an {n} x {n} array")
        Jm = np.array([[_number(x, "J entry") for x in row] for row in raw])
        try:
            J = ComplexStructure(Jm)
        except ValueError as exc:
            raise ValidationError(f"invalid complex structure: {exc}") from None
    return CtjDocument(R, J, metadata)


def read(path, bianchi_tol: float = BIANCHI_TOL) -> tuple[CtjDocument, str]:
    """Load a CTJ file; returns the document and the digest of its bytes."""
    data = Path(path).read_bytes()
    return loads(data, bianchi_tol), digest(data)

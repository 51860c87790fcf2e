"""JSON/CSV serialisation and atomic file output.

Player and share indices are 1-based in every serialised document.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import InvalidParam
from .scheme import EncodingMatrix, SchemeView


def plain(obj: Any) -> Any:
    """Recursively convert numpy scalars/arrays and tuples to JSON-native types."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps(obj: Any) -> str:
    # Python's float repr is the shortest round-trip form, i.e. full precision
    return json.dumps(plain(obj), indent=2, allow_nan=False) + "\n"


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    """Write via a temp file in the target directory and rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cvqss-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def scheme_to_dict(scheme: EncodingMatrix | SchemeView) -> dict:
    view = scheme if isinstance(scheme, SchemeView) else SchemeView(scheme, tuple(range(scheme.n)))
    return {
        "k": view.k,
        "n": view.n,
        "seed": view.enc.seed,
        "rows": view.enc.g.tolist(),
        "shares": [i + 1 for i in view.accessible],
    }


def scheme_from_dict(doc: dict) -> SchemeView:
    try:
        k = int(doc["k"])
        rows = np.array(doc["rows"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidParam(f"malformed scheme document: {exc}") from None
    enc = EncodingMatrix(rows, k, doc.get("seed"))
    shares = doc.get("shares") or list(range(1, enc.n + 1))
    accessible = tuple(int(i) - 1 for i in shares)
    if any(not 0 <= i < enc.n for i in accessible):
        raise InvalidParam(f"share indices {shares} out of range 1..{enc.n}")
    if "n" in doc and int(doc["n"]) != len(accessible):
        raise InvalidParam(f"n={doc['n']} does not match {len(accessible)} listed shares")
    return SchemeView(enc, accessible)


def load_scheme(path: str) -> SchemeView:
    with open(path) as fh:
        return scheme_from_dict(json.load(fh))

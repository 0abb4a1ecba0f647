"""JSON documents for channels, dilations and normal forms.

Matrices are stored as nested lists in the ordering named by the document's
``ordering`` key and converted to blocked ordering on load. Floats are
written with Python's shortest round-trip ``repr``, so a load/dump cycle is
bit-exact.

Channel document::

    {"kind": "channel", "n": 1, "ordering": "blocked",
     "X": [[...]], "Y": [[...]], "metadata": {...}}
"""

import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from .dilation import PassiveDilation
from .gaussian import GaussianChannel
from .normal_form import NormalForm
from .numerics import DEFAULT_TOL, Tolerance, max_norm
from .symplectic import ModeOrdering, OrthogonalSymplectic, reorder


class FileFormatError(ValueError):
    """Malformed or inconsistent input document."""


def to_lists(M) -> list:
    return np.asarray(M, dtype=float).tolist()


def _matrix(doc, key, size):
    try:
        M = np.array(doc[key], dtype=float)
    except KeyError:
        raise FileFormatError(f"missing key {key!r}") from None
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"{key!r} is not a numeric matrix: {exc}") from None
    if size == 0 and M.size == 0:
        return np.zeros((0, 0))
    if M.shape != (size, size):
        raise FileFormatError(f"{key!r} has shape {M.shape}, expected {(size, size)}")
    if not np.all(np.isfinite(M)):
        raise FileFormatError(f"{key!r} has non-finite entries")
    return M


def _count(doc, key, minimum=1):
    value = doc.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise FileFormatError(f"{key!r} must be an integer >= {minimum}")
    return value


def _ordering(doc):
    try:
        return ModeOrdering(doc.get("ordering", "blocked"))
    except ValueError:
        raise FileFormatError(f"unknown ordering {doc.get('ordering')!r}") from None


def _to_blocked(M, ordering, split=None):
    if ordering is ModeOrdering.BLOCKED or M.size == 0:
        return M
    return reorder(M, ModeOrdering.INTERLEAVED, ModeOrdering.BLOCKED, split)


def _from_blocked(M, ordering, split=None):
    M = np.asarray(M, dtype=float)
    if ordering is ModeOrdering.BLOCKED or M.size == 0:
        return M
    return reorder(M, ModeOrdering.BLOCKED, ModeOrdering.INTERLEAVED, split)


def read_document(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise FileFormatError(f"{path}: top level must be an object")
    return doc


def digest(path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_document(doc: dict, path=None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def channel_from_doc(doc: dict, tol: Tolerance = DEFAULT_TOL) -> GaussianChannel:
    """Build a blocked-ordering channel; ``Y`` must be symmetric within ``tol``."""
    n = _count(doc, "n")
    ordering = _ordering(doc)
    X = _to_blocked(_matrix(doc, "X", 2 * n), ordering)
    Y = _to_blocked(_matrix(doc, "Y", 2 * n), ordering)
    if max_norm(Y - Y.T) > tol.bound(max_norm(Y)):
        raise FileFormatError("Y is not symmetric")
    return GaussianChannel(X, Y)


def channel_to_doc(c: GaussianChannel, ordering=ModeOrdering.BLOCKED, metadata=None) -> dict:
    ordering = ModeOrdering(ordering)
    doc = {
        "kind": "channel",
        "n": c.n,
        "ordering": ordering.value,
        "X": to_lists(_from_blocked(c.X, ordering)),
        "Y": to_lists(_from_blocked(c.Y, ordering)),
    }
    if metadata:
        doc["metadata"] = dict(metadata)
    return doc


def dilation_from_doc(doc: dict) -> PassiveDilation:
    n = _count(doc, "n")
    l = _count(doc, "l", minimum=0)
    ordering = _ordering(doc)
    S = _to_blocked(_matrix(doc, "S", 2 * (n + l)), ordering, (n, l))
    gamma_E = _to_blocked(_matrix(doc, "gamma_E", 2 * l), ordering)
    return PassiveDilation(OrthogonalSymplectic(S, n, l), gamma_E)


def dilation_to_doc(dil: PassiveDilation, ordering=ModeOrdering.BLOCKED, verification=None) -> dict:
    """``S`` is written system-first; blocked means blocked per subsystem."""
    ordering = ModeOrdering(ordering)
    doc = {
        "kind": "dilation",
        "n": dil.n,
        "l": dil.l,
        "ordering": ordering.value,
        "S": to_lists(_from_blocked(dil.S.matrix, ordering, (dil.n, dil.l))),
        "gamma_E": to_lists(_from_blocked(dil.gamma_E, ordering)),
    }
    if verification is not None:
        doc["verification"] = verification
    return doc


def normal_form_to_doc(nf: NormalForm, residual: float, ordering=ModeOrdering.BLOCKED) -> dict:
    ordering = ModeOrdering(ordering)
    return {
        "kind": "normal_form",
        "n": nf.n,
        "ordering": ordering.value,
        "G": to_lists(_from_blocked(nf.G.matrix, ordering)),
        "F": to_lists(_from_blocked(nf.F.matrix, ordering)),
        "lambda": [float(x) for x in nf.lam],
        "gamma_E": to_lists(_from_blocked(nf.gamma_E, ordering)),
        "reconstruction_residual": residual,
    }

"""Reading metric, text and pattern files."""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .metric import FINITE, NORMED, WILDCARD, MetricSpace, from_points, validate

DEFAULT_WILDCARD_TOKEN = "?"


def _parse_p(value) -> float:
    if isinstance(value, str):
        if value.lower() in ("inf", "infinity"):
            return math.inf
        return float(value)
    return float(value)


def metric_from_dict(doc: dict, check_triangle: bool = True) -> MetricSpace:
    kind = doc.get("type")
    symbols = doc.get("symbols")
    if symbols is not None:
        symbols = [str(s) for s in symbols]
        if len(set(symbols)) != len(symbols):
            raise ValueError("duplicate symbol tokens in metric file")
    if kind == FINITE:
        return validate(doc["matrix"], check_triangle=check_triangle, symbols=symbols)
    if kind == NORMED:
        return from_points(doc["points"], p=_parse_p(doc.get("p", 2)), symbols=symbols)
    raise ValueError(f"metric type must be 'finite' or 'normed', got {kind!r}")


def metric_to_dict(ms: MetricSpace) -> dict:
    symbols = list(ms.symbols) if ms.symbols else [str(i) for i in range(ms.size)]
    if ms.kind == NORMED:
        p = "inf" if math.isinf(ms.p) else ms.p
        return {"type": NORMED, "p": p, "symbols": symbols, "points": ms.points.tolist()}
    return {"type": FINITE, "symbols": symbols, "matrix": (ms.matrix * ms.scale).tolist()}


def load_metric(path, check_triangle: bool = True) -> MetricSpace:
    """Load a metric JSON file (finite matrix or normed points)."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return metric_from_dict(doc, check_triangle=check_triangle)


def save_metric(ms: MetricSpace, path) -> None:
    Path(path).write_text(json.dumps(metric_to_dict(ms)), encoding="utf-8")


def tokens_to_ids(tokens, ms: MetricSpace, wildcard: str = DEFAULT_WILDCARD_TOKEN) -> np.ndarray:
    """Map tokens to symbol ids via the metric's symbol list.

    A metric without symbol names accepts the decimal ids as tokens.
    """
    if ms.symbols is None:
        index = {str(i): i for i in range(ms.size)}
    else:
        index = ms.symbol_index()
    out = np.empty(len(tokens), dtype=np.int64)
    for k, tok in enumerate(tokens):
        if tok == wildcard:
            out[k] = WILDCARD
        elif tok in index:
            out[k] = index[tok]
        else:
            raise ValueError(f"token {tok!r} at position {k} is not in the metric's alphabet")
    return out


def read_tokens(path) -> list:
    return Path(path).read_text(encoding="utf-8").split()


def read_symbols(path, ms: MetricSpace, wildcard: str = DEFAULT_WILDCARD_TOKEN,
                 raw_bytes: bool = False) -> np.ndarray:
    """Read a text or pattern file as symbol ids.

    With ``raw_bytes`` every byte is its own symbol id (0..255) and the
    metric must cover all byte values that occur.
    """
    if raw_bytes:
        ids = np.frombuffer(Path(path).read_bytes(), dtype=np.uint8).astype(np.int64)
        if ids.size and ids.max() >= ms.size:
            raise ValueError(f"byte value {int(ids.max())} outside alphabet of size {ms.size}")
        return ids
    return tokens_to_ids(read_tokens(path), ms, wildcard)

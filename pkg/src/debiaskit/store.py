"""Embedding snapshots: loading, export, lookup, and cosine primitives.

A snapshot is an immutable (vocabulary, N x d matrix) pair.  Every transform
elsewhere in the package produces a *new* snapshot; nothing here mutates in
place.  Two text formats are supported: ``glove_text`` (one ``token v1 .. vd``
record per line) and ``word2vec_text`` (same body preceded by an ``N d``
header line).
"""

from __future__ import annotations

import hashlib
import io
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

GLOVE_TEXT = "glove_text"
WORD2VEC_TEXT = "word2vec_text"
FORMATS = (GLOVE_TEXT, WORD2VEC_TEXT)

# Six decimal places on export keeps load(export(s)) within 5e-7 per component.
_EXPORT_FMT = "%.6f"

# Norms below this are treated as zero vectors; cosine against them is 0.
ZERO_NORM_EPS = 1e-12


class EmbeddingError(ValueError):
    """Base class for embedding-store failures."""


class EmbeddingFormatError(EmbeddingError):
    """Malformed input stream (bad header, ragged rows, duplicates, ...)."""


class UnknownTokenError(EmbeddingError):
    """One or more tokens are not in the vocabulary.

    Carries the complete list of missing tokens, not just the first, so
    callers can report every problem in one round trip.
    """

    def __init__(self, missing: Sequence[str]):
        self.missing = list(missing)
        super().__init__("unknown tokens: " + ", ".join(self.missing))


class EmbeddingSnapshot:
    """Immutable vocabulary plus row matrix, identified by a content hash."""

    def __init__(self, tokens: Sequence[str], matrix: np.ndarray):
        matrix = np.ascontiguousarray(matrix, dtype=np.float64)
        if matrix.ndim != 2:
            raise EmbeddingError("matrix must be 2-dimensional")
        if matrix.shape[1] < 2:
            raise EmbeddingError("embedding dimension must be at least 2")
        if len(tokens) != matrix.shape[0]:
            raise EmbeddingError(
                f"{len(tokens)} tokens but {matrix.shape[0]} matrix rows"
            )
        if not np.all(np.isfinite(matrix)):
            raise EmbeddingError("matrix contains non-finite components")
        index: dict[str, int] = {}
        for i, tok in enumerate(tokens):
            if not tok or tok != tok.strip() or any(c.isspace() for c in tok):
                raise EmbeddingError(f"invalid token at row {i}: {tok!r}")
            if tok in index:
                raise EmbeddingError(f"duplicate token: {tok!r}")
            index[tok] = i
        matrix.setflags(write=False)
        self._tokens = tuple(tokens)
        self._index = index
        self._matrix = matrix
        self.snapshot_id = self._content_id()

    def _content_id(self) -> str:
        h = hashlib.sha256()
        h.update(("\n".join(self._tokens)).encode("utf-8"))
        h.update(self._matrix.tobytes())
        return h.hexdigest()[:16]

    @property
    def tokens(self) -> tuple[str, ...]:
        return self._tokens

    @property
    def matrix(self) -> np.ndarray:
        """Read-only (N, d) float64 matrix."""
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[1]

    def __len__(self) -> int:
        return self._matrix.shape[0]

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def __repr__(self) -> str:
        return (
            f"EmbeddingSnapshot(n={len(self)}, d={self.dim},"
            f" id={self.snapshot_id})"
        )

    def row(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise UnknownTokenError([token]) from None

    def rows(self, tokens: Iterable[str]) -> list[int]:
        missing = [t for t in tokens if t not in self._index]
        if missing:
            raise UnknownTokenError(missing)
        return [self._index[t] for t in tokens]

    def vector(self, token: str) -> np.ndarray:
        return self._matrix[self.row(token)]

    def replace_matrix(self, matrix: np.ndarray) -> "EmbeddingSnapshot":
        """New snapshot with the same vocabulary and a different matrix."""
        return EmbeddingSnapshot(self._tokens, matrix)


@dataclass(frozen=True)
class WordSet:
    """A labelled, ordered list of tokens (e.g. a seed or evaluation set)."""

    label: str
    tokens: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if len(set(self.tokens)) != len(self.tokens):
            dupes = sorted({t for t in self.tokens if self.tokens.count(t) > 1})
            raise EmbeddingError(f"duplicate tokens in word set: {dupes}")

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


@dataclass(frozen=True)
class PairedWordSet:
    """Ordered list of token pairs (e.g. man-woman) for paired methods."""

    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        pairs = tuple((a, b) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if len(set(pairs)) != len(pairs):
            raise EmbeddingError("repeated pair in paired word set")

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def flat_tokens(self) -> tuple[str, ...]:
        out: list[str] = []
        for a, b in self.pairs:
            out.extend((a, b))
        return tuple(out)


TokenSetLike = Union[WordSet, Sequence[str]]


def as_tokens(tokens: TokenSetLike) -> tuple[str, ...]:
    """Accept a WordSet or a plain sequence of tokens."""
    if isinstance(tokens, WordSet):
        return tokens.tokens
    return tuple(tokens)


def _decode_lines(source) -> list[str]:
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    elif hasattr(source, "read"):
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    else:
        raise TypeError(f"unsupported stream type: {type(source)!r}")
    return [ln for ln in text.split("\n") if ln.strip() != ""]


def _parse_record(line: str, lineno: int, dim: int | None) -> tuple[str, list[float]]:
    parts = line.split()
    if len(parts) < 3:
        raise EmbeddingFormatError(
            f"line {lineno}: expected 'token v1 .. vd' with d >= 2"
        )
    token, raw = parts[0], parts[1:]
    try:
        values = [float(x) for x in raw]
    except ValueError:
        raise EmbeddingFormatError(
            f"line {lineno}: non-numeric component in record for {token!r}"
        ) from None
    if dim is not None and len(values) != dim:
        raise EmbeddingFormatError(
            f"line {lineno}: dimension mismatch ({len(values)} != {dim})"
        )
    return token, values


def load_embedding(source, format: str = GLOVE_TEXT, limit: int | None = None) -> EmbeddingSnapshot:
    """Parse a text embedding stream into a snapshot.

    ``source`` may be bytes, str, or a file-like object.  ``limit`` keeps only
    the first rows.  The dimension is inferred from the first record.
    """
    if format not in FORMATS:
        raise EmbeddingFormatError(f"unknown format: {format!r}")
    lines = _decode_lines(source)
    expected_n: int | None = None
    if format == WORD2VEC_TEXT:
        if not lines:
            raise EmbeddingFormatError("empty stream")
        head = lines[0].split()
        if len(head) != 2:
            raise EmbeddingFormatError("word2vec header must be 'N d'")
        try:
            expected_n, expected_d = int(head[0]), int(head[1])
        except ValueError:
            raise EmbeddingFormatError("word2vec header must be 'N d'") from None
        if expected_n < 0 or expected_d < 2:
            raise EmbeddingFormatError("word2vec header out of range")
        body = lines[1:]
        if len(body) != expected_n:
            raise EmbeddingFormatError(
                f"word2vec body has {len(body)} records, header says {expected_n}"
            )
    else:
        if not lines:
            raise EmbeddingFormatError("empty stream")
        body = lines

    if limit is not None:
        if limit < 0:
            raise EmbeddingError("limit must be non-negative")
        body = body[:limit]
    if not body:
        raise EmbeddingFormatError("no records in stream")

    tokens: list[str] = []
    rows: list[list[float]] = []
    dim: int | None = None
    seen: set[str] = set()
    for i, line in enumerate(body):
        token, values = _parse_record(line, i + 1, dim)
        if dim is None:
            dim = len(values)
            if format == WORD2VEC_TEXT and dim != expected_d:
                raise EmbeddingFormatError(
                    f"record dimension {dim} does not match header d={expected_d}"
                )
        if token in seen:
            raise EmbeddingFormatError(f"duplicate token: {token!r}")
        seen.add(token)
        tokens.append(token)
        rows.append(values)
    return EmbeddingSnapshot(tokens, np.array(rows, dtype=np.float64))


def export_embedding(snapshot: EmbeddingSnapshot, format: str = GLOVE_TEXT) -> bytes:
    """Serialize a snapshot back to the given text format (UTF-8 bytes)."""
    if format not in FORMATS:
        raise EmbeddingFormatError(f"unknown format: {format!r}")
    out = io.StringIO()
    if format == WORD2VEC_TEXT:
        out.write(f"{len(snapshot)} {snapshot.dim}\n")
    mat = snapshot.matrix
    for i, token in enumerate(snapshot.tokens):
        comps = " ".join(_EXPORT_FMT % x for x in mat[i])
        out.write(f"{token} {comps}\n")
    return out.getvalue().encode("utf-8")


def get_vectors(snapshot: EmbeddingSnapshot, tokens: TokenSetLike) -> np.ndarray:
    """Vectors for the tokens, in input order; raises with *all* missing tokens."""
    toks = as_tokens(tokens)
    idx = snapshot.rows(toks)
    return snapshot.matrix[idx].copy()


def cosine(x: np.ndarray, y: np.ndarray) -> float:
    """Cosine similarity; defined as 0.0 when either vector is (near) zero."""
    nx = float(np.linalg.norm(x))
    ny = float(np.linalg.norm(y))
    if nx <= ZERO_NORM_EPS or ny <= ZERO_NORM_EPS:
        return 0.0
    return float(np.dot(x, y) / (nx * ny))


def cosine_to_all(snapshot: EmbeddingSnapshot, vec: np.ndarray) -> np.ndarray:
    """Cosine of ``vec`` against every row (zero rows and zero ``vec`` give 0)."""
    mat = snapshot.matrix
    norms = np.linalg.norm(mat, axis=1)
    nv = float(np.linalg.norm(vec))
    sims = np.zeros(len(norms))
    if nv <= ZERO_NORM_EPS:
        return sims
    ok = norms > ZERO_NORM_EPS
    sims[ok] = (mat[ok] @ vec) / (norms[ok] * nv)
    return sims


def nearest_neighbors(snapshot: EmbeddingSnapshot, token: str, k: int) -> list[tuple[str, float]]:
    """Top-k rows by cosine similarity to ``token``, excluding the query row.

    Ties are broken by vocabulary order.  This *is* the exhaustive scan; there
    is no approximate index.
    """
    if not 1 <= k < len(snapshot):
        raise EmbeddingError(f"k must be in [1, {len(snapshot) - 1}], got {k}")
    qrow = snapshot.row(token)
    sims = cosine_to_all(snapshot, snapshot.matrix[qrow])
    candidates = np.arange(len(snapshot))
    candidates = candidates[candidates != qrow]
    # lexsort: primary key last -> sort by -sim, then vocabulary index
    order = np.lexsort((candidates, -sims[candidates]))
    top = candidates[order[:k]]
    return [(snapshot.tokens[i], float(sims[i])) for i in top]

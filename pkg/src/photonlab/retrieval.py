"""Deterministic semantic retrieval over learned composites.

The embedder is a hashed bag of tokens: lowercase the text, split on
non-alphanumerics, hash each token into one of 384 buckets with a fixed
64-bit seed, accumulate counts, and L2-normalize.  It is a pluggable stand-in
with the same contract a learned sentence encoder would satisfy
(deterministic, unit-norm, fixed 384-dim output); retrieval semantics --
cosine similarity, per-name deduplication, top-k, the reuse threshold -- do
not depend on which embedder is plugged in.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from threading import Lock

import numpy as np

from .toolbox import Composite, Toolbox, composite_text

__all__ = [
    "EMBEDDING_DIM",
    "MATCH_THRESHOLD",
    "HashedTokenEmbedder",
    "RetrievalHit",
    "MatchOutcome",
    "MatchDecision",
    "REUSE_OPTIONS",
    "EmbeddingIndex",
    "decide_match",
    "index_toolbox",
]

EMBEDDING_DIM = 384
MATCH_THRESHOLD = 0.80  # strict: a hit must exceed this to count as a reuse match
_HASH_SEED = 0x5EEDC0DE_2F17_3A41
_TOKEN_RE = re.compile(r"[a-z0-9]+")

# Consumer choices offered alongside an existing match.
REUSE_OPTIONS = ("use_this", "auto_improve", "generate_new")


class HashedTokenEmbedder:
    """Deterministic 384-dim text embedder (hashed bag of tokens)."""

    dim = EMBEDDING_DIM

    def embed(self, text: str) -> np.ndarray:
        vec = np.zeros(EMBEDDING_DIM, dtype=float)
        for token in _TOKEN_RE.findall(text.lower()):
            digest = hashlib.blake2b(
                token.encode("utf-8"), digest_size=8, key=_HASH_SEED.to_bytes(8, "little")
            ).digest()
            vec[int.from_bytes(digest, "little") % EMBEDDING_DIM] += 1.0
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            # Canonical fallback for token-free text: the first basis vector.
            vec[0] = 1.0
            return vec
        return vec / norm


@dataclass(frozen=True)
class RetrievalHit:
    name: str
    version: int
    similarity: float


class MatchOutcome(str, Enum):
    EXISTING_MATCH = "existing_match"
    NO_MATCH = "no_match"


@dataclass(frozen=True)
class MatchDecision:
    outcome: MatchOutcome
    best: RetrievalHit | None = None
    options: tuple[str, ...] = ()


@dataclass
class _Entry:
    name: str
    version: int
    vector: np.ndarray


class EmbeddingIndex:
    """Exact cosine index; queries run on an immutable snapshot.

    Additions take the writer lock and replace the snapshot; existing
    vectors are never recomputed, so adding entries cannot change the
    similarity of anything already indexed.
    """

    def __init__(self, embedder: HashedTokenEmbedder | None = None):
        self.embedder = embedder or HashedTokenEmbedder()
        self._entries: tuple[_Entry, ...] = ()
        self._lock = Lock()

    def __len__(self) -> int:
        return len(self._entries)

    def add(self, name: str, version: int, text: str) -> None:
        vector = self.embedder.embed(text)
        with self._lock:
            self._entries = self._entries + (_Entry(name, int(version), vector),)

    def add_composite(self, composite: Composite) -> None:
        self.add(composite.name, composite.version, composite_text(composite.name, composite.setup))

    def query(self, text: str, k: int = 5) -> list[RetrievalHit]:
        """Top-k hits, one per name group (highest version wins).

        Sorted by similarity descending; ties break on (name, version)
        ascending.
        """
        if k < 1:
            raise ValueError("k must be at least 1")
        entries = self._entries
        if not entries:
            return []
        q = self.embedder.embed(text)
        best_per_name: dict[str, tuple[int, float]] = {}
        for entry in entries:
            sim = float(np.dot(q, entry.vector))
            current = best_per_name.get(entry.name)
            if current is None or entry.version > current[0]:
                best_per_name[entry.name] = (entry.version, sim)
        hits = [RetrievalHit(name, v, s) for name, (v, s) in best_per_name.items()]
        hits.sort(key=lambda h: (-h.similarity, h.name, h.version))
        return hits[:k]

    def save(self, path: str | Path) -> None:
        """Derived on-disk cache; never authoritative."""
        payload = [
            {"name": e.name, "version": e.version, "vector": e.vector.tolist()}
            for e in self._entries
        ]
        Path(path).write_text(json.dumps(payload) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingIndex":
        index = cls()
        entries = []
        for obj in json.loads(Path(path).read_text(encoding="utf-8")):
            vec = np.asarray(obj["vector"], dtype=float)
            if vec.shape != (EMBEDDING_DIM,):
                raise ValueError(f"cached vector for {obj['name']!r} has wrong dimension")
            entries.append(_Entry(obj["name"], int(obj["version"]), vec))
        index._entries = tuple(entries)
        return index


def decide_match(hits: list[RetrievalHit]) -> MatchDecision:
    """Reuse decision: existing match iff the top similarity exceeds 0.80.

    The threshold is strict, so a similarity of exactly 0.80 is no match.
    """
    if hits and hits[0].similarity > MATCH_THRESHOLD:
        return MatchDecision(MatchOutcome.EXISTING_MATCH, hits[0], REUSE_OPTIONS)
    return MatchDecision(MatchOutcome.NO_MATCH)


def index_toolbox(toolbox: Toolbox, embedder: HashedTokenEmbedder | None = None) -> EmbeddingIndex:
    index = EmbeddingIndex(embedder)
    for composite in toolbox.composites:
        index.add_composite(composite)
    return index

"""Text embedders for the episodic store.

The default embedder is a hashed bag-of-words: deterministic, offline,
and cheap, which keeps tests hermetic. A remote embedder client with the
same interface talks to an OpenAI-compatible embeddings endpoint for
production-style setups.
"""

from __future__ import annotations

import hashlib
import math
import os
import re
from typing import Any, Protocol

import requests

EMBEDDING_DIM = 256

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def _stable_hash_64(token: str) -> int:
    # Python's builtin hash() is salted per process; use a keyed-less
    # blake2b digest so the bucket assignment survives restarts.
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def normalize(vector: list[float]) -> list[float]:
    norm = math.sqrt(sum(v * v for v in vector))
    if norm == 0.0:
        basis = [0.0] * len(vector)
        basis[0] = 1.0
        return basis
    return [v / norm for v in vector]


def cosine(a: list[float], b: list[float]) -> float:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(y * y for y in b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


class Embedder(Protocol):
    @property
    def dimension(self) -> int: ...

    def embed(self, text: str) -> list[float]: ...


class HashedEmbedder:
    """Deterministic bag-of-words embedder over hashed token buckets.

    Tokens are lowercased alphanumeric runs, each hashed to one of
    `dimension` buckets; bucket counts are L2-normalized. Empty text maps
    to the first basis vector so every embedding has unit norm.
    """

    def __init__(self, dimension: int = EMBEDDING_DIM) -> None:
        if dimension < 1:
            raise ValueError("dimension must be positive")
        self._dimension = dimension

    @property
    def dimension(self) -> int:
        return self._dimension

    def embed(self, text: str) -> list[float]:
        counts = [0.0] * self._dimension
        for token in tokenize(text):
            counts[_stable_hash_64(token) % self._dimension] += 1.0
        return normalize(counts)


def embed_deterministic(text: str, dimension: int = EMBEDDING_DIM) -> list[float]:
    return HashedEmbedder(dimension).embed(text)


class RemoteEmbedder:
    """Client for an OpenAI-compatible /embeddings endpoint.

    Responses may carry the vector as {"data": [{"embedding": [...]}]} or
    as a bare {"embedding": [...]}; both shapes are accepted. Output is
    re-normalized so downstream cosine math matches the local embedder.
    """

    def __init__(
        self,
        base_url: str,
        model: str,
        dimension: int,
        api_key_env: str = "HEARTH_API_KEY",
        timeout_s: float = 30.0,
        session: requests.Session | None = None,
    ) -> None:
        self.base_url = base_url.rstrip("/")
        self.model = model
        self._dimension = dimension
        self.api_key_env = api_key_env
        self.timeout_s = timeout_s
        self._session = session or requests.Session()

    @property
    def dimension(self) -> int:
        return self._dimension

    def embed(self, text: str) -> list[float]:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.api_key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        response = self._session.post(
            f"{self.base_url}/embeddings",
            json={"model": self.model, "input": [text]},
            headers=headers,
            timeout=self.timeout_s,
        )
        response.raise_for_status()
        vector = _extract_embedding(response.json())
        if len(vector) != self._dimension:
            raise ValueError(
                f"embedding dimension mismatch: expected {self._dimension}, "
                f"got {len(vector)}"
            )
        return normalize([float(v) for v in vector])


def _extract_embedding(payload: Any) -> list[float]:
    if isinstance(payload, dict):
        if isinstance(payload.get("embedding"), list):
            return payload["embedding"]
        data = payload.get("data")
        if isinstance(data, list) and data and isinstance(data[0], dict):
            vector = data[0].get("embedding")
            if isinstance(vector, list):
                return vector
    raise ValueError("embeddings response carries no embedding vector")

"""Word vectors, tokenization and normalized cosine similarity.

Vectors come from a plain-text file in the common pre-trained format:
first line ``<count> <dim>``, then one ``token v1 ... v_dim`` row per
word. Phrase vectors are arithmetic means of in-vocabulary token
vectors; similarity is cosine rescaled from [-1, 1] to [0, 1] with the
theoretical min-max constants so scores stay comparable across graphs.
"""

from __future__ import annotations

import logging
import re
from typing import Iterable, Optional, TextIO, Union

import numpy as np

logger = logging.getLogger(__name__)

__all__ = ["DEFAULT_STOPWORDS", "tokenize", "WordVectorTable", "similarity"]

# Fixed bundled set of function words excluded from similarity matching.
DEFAULT_STOPWORDS = frozenset(
    """
    a an and are as at be been but by did do does for from had has have he
    her his how i if in is it its me my no not of on or our she so that the
    their them then there these they this those to was we were what when
    where which who whom why will with you your
    """.split()
)

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase tokens split on whitespace/punctuation; possessive 's dropped."""
    text = text.lower().replace("’", "'")
    text = re.sub(r"'s\b", " ", text)
    return _TOKEN_RE.findall(text)


def similarity(a: np.ndarray, b: np.ndarray) -> float:
    """(cos(a, b) + 1) / 2, clipped to [0, 1]; zero-norm vectors score 0."""
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        logger.warning("similarity of a zero-norm vector defined as 0")
        return 0.0
    cos = float(np.dot(a, b) / (na * nb))
    return min(1.0, max(0.0, (cos + 1.0) / 2.0))


class WordVectorTable:
    """Immutable token -> vector table plus the stopword set."""

    def __init__(
        self,
        entries: dict[str, np.ndarray],
        stopwords: Iterable[str] = DEFAULT_STOPWORDS,
    ):
        if not entries:
            raise ValueError("empty vector table")
        dims = {v.shape for v in entries.values()}
        if len(dims) != 1:
            raise ValueError(f"inconsistent vector dimensions: {dims}")
        (self.dim,) = dims.pop()
        self.entries = {t.lower(): np.asarray(v, dtype=float) for t, v in entries.items()}
        self.stopwords = frozenset(w.lower() for w in stopwords)

    def __contains__(self, token: str) -> bool:
        return token.lower() in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def vector(self, token: str) -> Optional[np.ndarray]:
        return self.entries.get(token.lower())

    def is_stopword(self, token: str) -> bool:
        return token.lower() in self.stopwords

    def content_tokens(self, text: str) -> list[str]:
        """Tokens that are neither stopwords nor out of vocabulary."""
        return [
            t for t in tokenize(text) if t not in self.stopwords and t in self.entries
        ]

    def phrase_vector(self, text: str, drop_stopwords: bool = True) -> Optional[np.ndarray]:
        """Mean of in-vocabulary token vectors; None if no token qualifies."""
        tokens = tokenize(text)
        if drop_stopwords:
            tokens = [t for t in tokens if t not in self.stopwords]
        vectors = [self.entries[t] for t in tokens if t in self.entries]
        if not vectors:
            return None
        return np.mean(vectors, axis=0)

    def similarity(self, a: np.ndarray, b: np.ndarray) -> float:
        return similarity(a, b)

    # ------------------------------------------------------------------
    # loading
    # ------------------------------------------------------------------

    @classmethod
    def load(
        cls,
        vectors: Union[str, TextIO],
        stopwords: Optional[Union[str, TextIO]] = None,
    ) -> "WordVectorTable":
        if isinstance(vectors, str):
            with open(vectors, encoding="utf-8") as fh:
                return cls.load(fh, stopwords)
        header = vectors.readline().split()
        if len(header) != 2:
            raise ValueError("vector file must start with '<count> <dim>'")
        count, dim = int(header[0]), int(header[1])
        entries: dict[str, np.ndarray] = {}
        for line in vectors:
            parts = line.rstrip("\n").split(" ")
            if not parts or not parts[0]:
                continue
            token = parts[0].lower()
            values = np.array([float(x) for x in parts[1:] if x], dtype=float)
            if values.shape != (dim,):
                raise ValueError(f"token {token!r} has {values.size} components, expected {dim}")
            entries[token] = values
        if len(entries) != count:
            logger.warning("vector file header said %d tokens, found %d", count, len(entries))
        stop: Iterable[str] = DEFAULT_STOPWORDS
        if stopwords is not None:
            if isinstance(stopwords, str):
                with open(stopwords, encoding="utf-8") as fh:
                    stop = [w.strip() for w in fh if w.strip()]
            else:
                stop = [w.strip() for w in stopwords if w.strip()]
        return cls(entries, stop)

    def save(self, stream: TextIO) -> None:
        stream.write(f"{len(self.entries)} {self.dim}\n")
        for token in sorted(self.entries):
            values = " ".join(repr(float(x)) for x in self.entries[token])
            stream.write(f"{token} {values}\n")

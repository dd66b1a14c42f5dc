from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Sequence

from . import words as W


@dataclass(frozen=True)
class Presentation:
    """A finite presentation: generator names and relators as signed-index words."""

    generators: tuple
    relators: tuple = field(default=())

    def __post_init__(self):
        rels = tuple(W.free_reduce(r) for r in self.relators)
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(r for r in rels if r))
        n = len(self.generators)
        for r in self.relators:
            for x in r:
                if x == 0 or abs(x) > n:
                    raise ValueError(f"relator letter {x} out of range for {n} generators")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def alphabet(self) -> dict:
        return {name: (k + 1,) for k, name in enumerate(self.generators)}

    def parse(self, text: str) -> tuple:
        return W.parse(text, self.alphabet())

    def format(self, w: Sequence[int]) -> str:
        return W.to_string(w, self.generators)

    @classmethod
    def from_strings(cls, generators: Sequence[str], relators: Sequence[str], extra: dict | None = None) -> Presentation:
        """Build from relator strings; ``extra`` maps additional names to words in the generators.

        A relator string may contain ``=``; ``a = b`` becomes ``a b^-1``.
        """
        alphabet = {name: (k + 1,) for k, name in enumerate(generators)}
        if extra:
            alphabet.update(extra)
        rels = []
        for text in relators:
            parts = text.split("=")
            head = W.parse(parts[0], alphabet)
            if len(parts) == 1:
                rels.append(W.free_reduce(head))
            for part in parts[1:]:
                rhs = W.parse(part, alphabet)
                rels.append(W.free_reduce(head + W.inverse(rhs)))
        return cls(tuple(generators), tuple(rels))

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(repr((self.generators, self.relators)).encode())
        return h.hexdigest()


def words_digest(ws: Sequence[Sequence[int]]) -> str:
    return hashlib.sha256(repr(tuple(tuple(w) for w in ws)).encode()).hexdigest()

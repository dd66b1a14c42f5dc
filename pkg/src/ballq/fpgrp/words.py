"""Words over a finite alphabet as tuples of signed generator indices.

Letter ``k`` (k >= 1) is generator number k-1; ``-k`` is its inverse.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

Word = tuple

_EXP = re.compile(r"\^\s*\{?\s*([+-]?\d+)\s*\}?")


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w: Sequence[int]) -> Word:
    w = list(free_reduce(w))
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i : j + 1])


def power(w: Sequence[int], n: int) -> Word:
    if n < 0:
        return tuple(inverse(w)) * (-n)
    return tuple(w) * n


def commutator(x: Sequence[int], y: Sequence[int]) -> Word:
    """[x, y] = x y x^-1 y^-1."""
    return free_reduce(tuple(x) + tuple(y) + inverse(x) + inverse(y))


def cyclic_normal_form(w: Sequence[int]) -> Word:
    """Lexicographically least rotation of the cyclic reduction of w or of its inverse."""
    best = None
    for cand in (cyclic_reduce(w), cyclic_reduce(inverse(w))):
        for k in range(max(len(cand), 1)):
            rot = cand[k:] + cand[:k]
            if best is None or rot < best:
                best = rot
    return best if best is not None else ()


def is_cyclic_conjugate(w1: Sequence[int], w2: Sequence[int]) -> bool:
    """True if the cyclic reductions of w1 and w2 are rotations of each other."""
    a, b = cyclic_reduce(w1), cyclic_reduce(w2)
    if len(a) != len(b):
        return False
    if not a:
        return True
    doubled = a + a
    n = len(a)
    return any(doubled[k : k + n] == b for k in range(n))


def substitute(w: Sequence[int], images: Mapping[int, Sequence[int]] | Sequence[Sequence[int]]) -> Word:
    """Replace generator k (1-based) by images[k] (mapping) or images[k-1] (sequence)."""
    out: list[int] = []
    is_map = isinstance(images, Mapping)
    for x in w:
        img = images[abs(x)] if is_map else images[abs(x) - 1]
        out.extend(img if x > 0 else inverse(img))
    return free_reduce(out)


def exponent_sums(w: Iterable[int], ngens: int) -> list[int]:
    v = [0] * ngens
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


def parse(text: str, alphabet: Mapping[str, Sequence[int]]) -> Word:
    """Parse words like ``vuv^{-1}j^4(buv)^3``; spaces are optional.

    ``alphabet`` maps names to their expansions as words. Names are matched
    greedily, longest first, so multi-character names may be run together.
    """
    names = sorted(alphabet, key=len, reverse=True)
    stack: list[list[int]] = [[]]
    pending: list[int] | None = None
    pos, n = 0, len(text)

    def flush():
        nonlocal pending
        if pending is not None:
            stack[-1].extend(pending)
            pending = None

    while pos < n:
        ch = text[pos]
        if ch.isspace() or ch in "*.":
            pos += 1
        elif ch == "(":
            flush()
            stack.append([])
            pos += 1
        elif ch == ")":
            flush()
            if len(stack) < 2:
                raise ValueError(f"unbalanced parentheses in {text!r}")
            pending = stack.pop()
            pos += 1
        elif ch == "^":
            m = _EXP.match(text, pos)
            if m is None or pending is None:
                raise ValueError(f"bad exponent at position {pos} in {text!r}")
            pending = list(power(pending, int(m.group(1))))
            pos = m.end()
        else:
            for name in names:
                if text.startswith(name, pos):
                    flush()
                    pending = list(alphabet[name])
                    pos += len(name)
                    break
            else:
                raise KeyError(f"unknown generator at position {pos} in {text!r}")
    flush()
    if len(stack) != 1:
        raise ValueError(f"unbalanced parentheses in {text!r}")
    return tuple(stack[0])


def to_string(w: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    i = 0
    while i < len(w):
        x = w[i]
        n = 1
        while i + n < len(w) and w[i + n] == x:
            n += 1
        e = n if x > 0 else -n
        parts.append(names[abs(x) - 1] + ("" if e == 1 else f"^{e}"))
        i += n
    return " ".join(parts) if parts else "1"

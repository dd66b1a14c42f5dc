"""Flat-file cache for closed coset tables.

File layout (little endian):

    magic     8 bytes   b"BQCOSET1"
    pres      32 bytes  sha256 of the presentation
    subgens   32 bytes  sha256 of the subgroup generator words
    ngens     u32
    index     u32
    width     u8        bytes per entry (1, 2 or 4)
    body      index * 2 * ngens entries, row-major, unsigned, fixed width

A file whose header does not match the requested key is ignored.
"""

from __future__ import annotations

import hashlib
import os
import struct
import sys
import tempfile
from array import array
from pathlib import Path
from typing import Sequence

from .coset import CosetTable, todd_coxeter
from .presentation import Presentation, words_digest

MAGIC = b"BQCOSET1"
_HEADER = struct.Struct("<8s32s32sIIB")
_TYPECODES = {1: "B", 2: "H", 4: "I"}


def _key(p: Presentation, subgens: Sequence) -> tuple:
    return bytes.fromhex(p.digest()), bytes.fromhex(words_digest(subgens))


def cache_path(cache_dir: str | os.PathLike, p: Presentation, subgens: Sequence) -> Path:
    pk, sk = _key(p, subgens)
    name = hashlib.sha256(pk + sk).hexdigest()[:32] + ".ctab"
    return Path(cache_dir) / name


def write_table(path: str | os.PathLike, t: CosetTable, p: Presentation) -> None:
    pk, sk = _key(p, t.subgens)
    width = 1 if t.index < 2**8 else 2 if t.index < 2**16 else 4
    body = array(_TYPECODES[width], (x for row in t.table for x in row))
    if body.itemsize != width:
        raise RuntimeError("unexpected array item size")
    if sys.byteorder != "little":
        body.byteswap()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    with os.fdopen(fd, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, pk, sk, t.ngens, t.index, width))
        fh.write(body.tobytes())
    os.replace(tmp, path)


def read_table(path: str | os.PathLike, p: Presentation, subgens: Sequence) -> CosetTable | None:
    """The cached table, or None if the file is missing, truncated or keyed differently."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError:
        return None
    if len(data) < _HEADER.size:
        return None
    magic, pk, sk, ngens, index, width = _HEADER.unpack_from(data)
    if magic != MAGIC or (pk, sk) != _key(p, subgens) or ngens != p.ngens or width not in _TYPECODES:
        return None
    body = array(_TYPECODES[width])
    raw = data[_HEADER.size :]
    ncols = 2 * ngens
    if len(raw) != index * ncols * width:
        return None
    body.frombytes(raw)
    if sys.byteorder != "little":
        body.byteswap()
    table = [list(body[i * ncols : (i + 1) * ncols]) for i in range(index)]
    return CosetTable(ngens, table, subgens)


def cached_todd_coxeter(
    p: Presentation, subgens: Sequence = (), cache_dir: str | os.PathLike | None = None, max_cosets: int = 2_000_000
) -> CosetTable:
    """todd_coxeter with an optional on-disk cache keyed by content hashes."""
    subgens = tuple(tuple(w) for w in subgens)
    if cache_dir is None:
        return todd_coxeter(p, subgens, max_cosets=max_cosets)
    path = cache_path(cache_dir, p, subgens)
    t = read_table(path, p, subgens)
    if t is not None and t.is_closed():
        return t
    t = todd_coxeter(p, subgens, max_cosets=max_cosets)
    write_table(path, t, p)
    return t

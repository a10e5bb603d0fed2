"""Matrix export/import.

Text: ``# key=value`` header lines, then ``i j value`` per upper-triangle
position, 1-based.  Binary: fixed header followed by the three coordinate arrays.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .ensemble import BandPattern, SampledMatrix, build_pattern, custom_pattern
from .errors import ValidationError

_MAGIC = b"HBMX"
_VERSION = 1
_KINDS = ("band", "cyclic_band", "custom_mask")
_HEADER = struct.Struct("<4sHBdqqQQ")  # magic, version, kind, mu, seed, replica, n, count


def write_text(m: SampledMatrix, path) -> None:
    path = Path(path)
    with path.open("w") as fh:
        fh.write(f"# n={m.n}\n# mu={m.pattern.mu!r}\n# kind={m.pattern.kind}\n")
        fh.write(f"# seed={'' if m.seed is None else m.seed}\n")
        fh.write(f"# replica={'' if m.replica_index is None else m.replica_index}\n")
        for i, j, v in zip(m.rows.tolist(), m.cols.tolist(), m.values.tolist()):
            fh.write(f"{i + 1} {j + 1} {v!r}\n")


def read_text(path, pattern: BandPattern | None = None) -> SampledMatrix:
    meta = {}
    entries = {}
    with Path(path).open() as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                meta[key.strip()] = val.strip()
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValidationError(f"line {lineno}: expected 'i j value'")
            i, j, v = int(parts[0]) - 1, int(parts[1]) - 1, float(parts[2])
            key = (min(i, j), max(i, j))
            if key in entries and entries[key] != v:
                raise ValidationError(f"line {lineno}: ({i + 1}, {j + 1}) breaks symmetry")
            entries[key] = v
    n = int(meta["n"]) if "n" in meta else 1 + max(max(k) for k in entries)
    mu = float(meta.get("mu", 1.0))
    kind = meta.get("kind", "custom_mask")
    seed = int(meta["seed"]) if meta.get("seed") else None
    replica = int(meta["replica"]) if meta.get("replica") else None
    return _assemble(n, mu, kind, entries, seed, replica, pattern)


def write_binary(m: SampledMatrix, path) -> None:
    r, c, v = m.rows, m.cols, m.values
    header = _HEADER.pack(
        _MAGIC,
        _VERSION,
        _KINDS.index(m.pattern.kind),
        float(m.pattern.mu),
        -1 if m.seed is None else int(m.seed),
        -1 if m.replica_index is None else int(m.replica_index),
        m.n,
        v.size,
    )
    with Path(path).open("wb") as fh:
        fh.write(header)
        fh.write(r.astype("<i8").tobytes())
        fh.write(c.astype("<i8").tobytes())
        fh.write(v.astype("<f8").tobytes())


def read_binary(path, pattern: BandPattern | None = None) -> SampledMatrix:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise ValidationError("file too short for a matrix header")
    magic, version, kind, mu, seed, replica, n, count = _HEADER.unpack_from(data)
    if magic != _MAGIC or version != _VERSION:
        raise ValidationError("not a matrix file of a supported version")
    off = _HEADER.size
    if len(data) != off + count * 24:
        raise ValidationError("matrix file is truncated or has trailing bytes")
    r = np.frombuffer(data, "<i8", count, off)
    c = np.frombuffer(data, "<i8", count, off + 8 * count)
    v = np.frombuffer(data, "<f8", count, off + 16 * count)
    entries = {}
    for i, j, x in zip(r.tolist(), c.tolist(), v.tolist()):
        if i > j:
            raise ValidationError("binary matrix files store the upper triangle only")
        entries[(i, j)] = x
    return _assemble(n, mu, _KINDS[kind], entries, None if seed < 0 else seed, None if replica < 0 else replica, pattern)


def _assemble(n, mu, kind, entries, seed, replica, pattern):
    if pattern is None:
        if kind == "custom_mask":
            pattern = custom_pattern(n, mu, entries.keys(), validate=False)
        else:
            pattern = build_pattern(n, mu, kind)
    if pattern.n != n:
        raise ValidationError(f"file dimension {n} does not match pattern dimension {pattern.n}")
    for i, j in entries:
        if not (0 <= i < n and 0 <= j < n) or not pattern.contains(i, j):
            raise ValidationError(f"entry ({i + 1}, {j + 1}) lies outside the pattern")
    r, c = pattern.upper
    values = np.array([entries.get((i, j), 0.0) for i, j in zip(r.tolist(), c.tolist())], dtype=float)
    return SampledMatrix(pattern, values, None, seed, replica)

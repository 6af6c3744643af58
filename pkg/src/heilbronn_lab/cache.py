"""Per-prime binary cache files.

Layout (little endian)::

    header   8s magic | u16 version | u16 flags | u64 p | u32 nsections
    section  16s name | u8 kind (0 json, 1 int64 array) | u64 nbytes | payload
    trailer  32 bytes sha256 of everything above

Files are written to a temporary name and renamed into place, so concurrent
writers of different primes (or the same prime) never expose partial files.
"""
import hashlib
import json
import logging
import os
import struct
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)

MAGIC = b"HBLCACHE"
VERSION = 1
_HEADER = struct.Struct("<8sHHQI")
_SECTION = struct.Struct("<16sBQ")
_KIND_JSON, _KIND_I64 = 0, 1


class CacheError(Exception):
    pass


@dataclass
class CacheEntry:
    p: int
    meta: dict = field(default_factory=dict)
    arrays: dict = field(default_factory=dict)
    version: int = VERSION


def cache_path(cache_dir, p):
    return Path(cache_dir) / f"p{int(p):07d}.hbl"


def encode(entry):
    body = bytearray()
    sections = [("meta", _KIND_JSON, json.dumps(entry.meta, sort_keys=True).encode())]
    for name in sorted(entry.arrays):
        arr = np.ascontiguousarray(entry.arrays[name], dtype="<i8")
        sections.append((name, _KIND_I64, arr.tobytes()))
    body += _HEADER.pack(MAGIC, entry.version, 0, entry.p, len(sections))
    for name, kind, payload in sections:
        body += _SECTION.pack(name.encode("ascii"), kind, len(payload))
        body += payload
    return bytes(body) + hashlib.sha256(body).digest()


def decode(blob):
    if len(blob) < _HEADER.size + 32:
        raise CacheError("truncated file")
    body, digest = blob[:-32], blob[-32:]
    if hashlib.sha256(body).digest() != digest:
        raise CacheError("checksum mismatch")
    magic, version, _flags, p, nsec = _HEADER.unpack_from(body, 0)
    if magic != MAGIC:
        raise CacheError("bad magic")
    if version != VERSION:
        raise CacheError(f"version {version} != {VERSION}")
    off = _HEADER.size
    entry = CacheEntry(p)
    for _ in range(nsec):
        raw, kind, nbytes = _SECTION.unpack_from(body, off)
        off += _SECTION.size
        payload = body[off:off + nbytes]
        off += nbytes
        name = raw.rstrip(b"\0").decode("ascii")
        if kind == _KIND_JSON:
            entry.meta = json.loads(payload)
        elif kind == _KIND_I64:
            entry.arrays[name] = np.frombuffer(payload, dtype="<i8").astype(np.int64)
        else:
            raise CacheError(f"unknown section kind {kind}")
    if off != len(body):
        raise CacheError("trailing bytes")
    return entry


def save(cache_dir, entry):
    path = cache_path(cache_dir, entry.p)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(encode(entry))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def load(cache_dir, p):
    """The cached entry for p, or None if absent; corrupt files are reported and ignored."""
    path = cache_path(cache_dir, p)
    if not path.exists():
        return None
    try:
        entry = decode(path.read_bytes())
    except CacheError as exc:
        log.warning("cache entry %s unusable (%s); recomputing", path, exc)
        return None
    if entry.p != p:
        log.warning("cache entry %s holds p=%d; recomputing", path, entry.p)
        return None
    return entry

"""Binary cache for enumerated groups and their quantum Bruhat graphs.

Layout (all little-endian):

    magic   "WQBG"
    version u32 (currently 1)
    label   u16 length + utf-8 bytes
    rank    u32
    n_pos   u32
    count   u32 (group order)
    flags   u8  (bit 0: a QBG section follows)
    GRP section: element images, int16, count x n_pos
    QBG section (optional): n u64, then out_ptr i64[n+1], out_dst i64[E],
        out_kind i8[E], out_root i32[E], in_ptr, in_src, in_kind, in_root,
        weight_enc i64[n_pos]
    crc32   u32 over everything before it

Loading validates magic, version, and checksum, then rebuilds the dense
element index; arrays round-trip bit-identically.
"""

from __future__ import annotations

import struct
import zlib
from typing import Optional

import numpy as np

from .coxeter import CoxeterGroup, ElementTable, get_group
from .qbg import QuantumBruhatGraph

MAGIC = b"WQBG"
VERSION = 1


class CacheError(RuntimeError):
    pass


def _pack_array(a: np.ndarray) -> bytes:
    return struct.pack("<Q", a.nbytes) + a.tobytes()


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CacheError("truncated cache file")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u8(self) -> int:
        return struct.unpack("<B", self.take(1))[0]

    def u16(self) -> int:
        return struct.unpack("<H", self.take(2))[0]

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]

    def array(self, dtype, count: Optional[int] = None) -> np.ndarray:
        nbytes = self.u64()
        raw = self.take(nbytes)
        a = np.frombuffer(raw, dtype=dtype).copy()
        if count is not None and len(a) != count:
            raise CacheError("section length mismatch")
        return a


def save_cache(path, group: CoxeterGroup, graph: Optional[QuantumBruhatGraph] = None) -> None:
    table = group.enumerate()
    mat = table.mat.astype(np.int16)
    label_b = group.label.encode()
    body = bytearray()
    body += MAGIC
    body += struct.pack("<I", VERSION)
    body += struct.pack("<H", len(label_b)) + label_b
    body += struct.pack("<III", group.rank, group.n_pos, len(table))
    body += struct.pack("<B", 1 if graph is not None else 0)
    body += _pack_array(mat)
    if graph is not None:
        body += struct.pack("<Q", graph.n)
        for a, dt in [
            (graph.out_ptr, np.int64), (graph.out_dst, np.int64),
            (graph.out_kind, np.int8), (graph.out_root, np.int32),
            (graph.in_ptr, np.int64), (graph.in_src, np.int64),
            (graph.in_kind, np.int8), (graph.in_root, np.int32),
            (graph.weight_enc, np.int64),
        ]:
            body += _pack_array(np.ascontiguousarray(a, dtype=dt))
    body += struct.pack("<I", zlib.crc32(bytes(body)))
    with open(path, "wb") as f:
        f.write(bytes(body))


def load_cache(path) -> tuple[CoxeterGroup, ElementTable, Optional[QuantumBruhatGraph]]:
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < 12:
        raise CacheError("truncated cache file")
    stored_crc = struct.unpack("<I", data[-4:])[0]
    if zlib.crc32(data[:-4]) != stored_crc:
        raise CacheError("checksum mismatch")
    r = _Reader(data[:-4])
    if r.take(4) != MAGIC:
        raise CacheError("bad magic")
    version = r.u32()
    if version != VERSION:
        raise CacheError(f"unsupported cache version {version}")
    label = r.take(r.u16()).decode()
    rank = r.u32()
    n_pos = r.u32()
    count = r.u32()
    flags = r.u8()
    group = get_group(label)
    if group.rank != rank or group.n_pos != n_pos:
        raise CacheError("cache shape disagrees with the type label")
    mat = r.array(np.int16).reshape(count, n_pos)
    index = {mat[i].tobytes(): i for i in range(count)}
    table = group._cache_enum(mat, index)
    graph = None
    if flags & 1:
        n = r.u64()
        out_ptr = r.array(np.int64)
        out_dst = r.array(np.int64)
        out_kind = r.array(np.int8)
        out_root = r.array(np.int32)
        in_ptr = r.array(np.int64)
        in_src = r.array(np.int64)
        in_kind = r.array(np.int8)
        in_root = r.array(np.int32)
        weight_enc = r.array(np.int64, n_pos)
        graph = QuantumBruhatGraph(
            group, int(n), out_ptr, out_dst, out_kind, out_root,
            in_ptr, in_src, in_kind, in_root, weight_enc,
        )
    return group, table, graph

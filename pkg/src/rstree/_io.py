"""Little-endian binary framing shared by every serializable structure.

A structure is written as ``tag (u8) | payload length (u64) | payload``.
Payload fields are 64-bit little-endian words; byte strings are padded
to a whole number of words.
"""

from __future__ import annotations

import struct

import numpy as np

_U64 = struct.Struct("<Q")
_I64 = struct.Struct("<q")


class FormatError(ValueError):
    """Raised when serialized bytes do not decode to the expected structure."""


class Writer:
    def __init__(self) -> None:
        self._parts: list[bytes] = []

    def u64(self, value: int) -> None:
        self._parts.append(_U64.pack(int(value)))

    def i64(self, value: int) -> None:
        self._parts.append(_I64.pack(int(value)))

    def words(self, arr) -> None:
        a = np.ascontiguousarray(arr, dtype="<u8")
        self.u64(a.size)
        self._parts.append(a.tobytes())

    def raw(self, data: bytes) -> None:
        self.u64(len(data))
        pad = (-len(data)) % 8
        self._parts.append(bytes(data) + b"\0" * pad)

    def struct(self, obj) -> None:
        self._parts.append(dump(obj))

    def getvalue(self) -> bytes:
        return b"".join(self._parts)


class Reader:
    def __init__(self, data: bytes | memoryview, pos: int = 0, end: int | None = None) -> None:
        self._mv = memoryview(data)
        self.pos = pos
        self.end = len(self._mv) if end is None else end

    def _take(self, k: int) -> memoryview:
        if self.pos + k > self.end:
            raise FormatError("truncated input")
        out = self._mv[self.pos : self.pos + k]
        self.pos += k
        return out

    def u64(self) -> int:
        return _U64.unpack(self._take(8))[0]

    def i64(self) -> int:
        return _I64.unpack(self._take(8))[0]

    def words(self) -> np.ndarray:
        k = self.u64()
        return np.frombuffer(bytes(self._take(8 * k)), dtype="<u8").astype(np.uint64)

    def raw(self) -> bytes:
        k = self.u64()
        data = bytes(self._take(k))
        self._take((-k) % 8)
        return data

    def struct(self, cls):
        return load(self, cls)

    def done(self) -> bool:
        return self.pos >= self.end


def dump(obj) -> bytes:
    w = Writer()
    obj._write(w)
    payload = w.getvalue()
    return obj.TAG + _U64.pack(len(payload)) + payload


def load(r: Reader, cls):
    tag = bytes(r._take(1))
    if tag != cls.TAG:
        raise FormatError(f"expected tag {cls.TAG!r} for {cls.__name__}, found {tag!r}")
    length = r.u64()
    sub = Reader(r._mv, r.pos, r.pos + length)
    obj = cls._read(sub)
    if sub.pos != sub.end:
        raise FormatError(f"{cls.__name__}: {sub.end - sub.pos} trailing payload bytes")
    r.pos += length
    return obj


def to_bytes(obj) -> bytes:
    return dump(obj)


def from_bytes(cls, data: bytes):
    r = Reader(data)
    obj = load(r, cls)
    if not r.done():
        raise FormatError("trailing bytes after structure")
    return obj

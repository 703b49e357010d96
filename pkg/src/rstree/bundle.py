"""RST1 container files for reference and target index sets.

Layout (little-endian)::

    "RST1" | version u16 | section count u16 | reserved u32
    count x (tag 8 bytes | payload offset u64 | payload length u64)
    payloads, each followed by the CRC32 of its bytes (u32)

A target set records the sha256 of its reference text and refuses to load
against any other reference.
"""

from __future__ import annotations

import hashlib
import json
import struct
import zlib
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ._io import FormatError, from_bytes, to_bytes
from .rfm import RelativeFM, RFMConfig, RSelect
from .rlcp import RLCPArray, dlcp
from .rlz import RLZConfig, RLZMatcher, TokenMap
from .succinct import SLArray
from .textindex import FMConfig, FMIndex, SuffixStructures, as_text

MAGIC = b"RST1"
VERSION = 1
_HEAD = struct.Struct("<4sHHI")
_ENTRY = struct.Struct("<8sQQ")
_CRC = struct.Struct("<I")


def pack_container(sections: list[tuple[str, bytes]]) -> bytes:
    head = _HEAD.size + _ENTRY.size * len(sections)
    table, body = [], []
    off = head
    for tag, payload in sections:
        name = tag.encode("ascii")
        if len(name) > 8:
            raise ValueError(f"section tag {tag!r} longer than 8 bytes")
        table.append(_ENTRY.pack(name.ljust(8, b"\0"), off, len(payload)))
        body.append(payload + _CRC.pack(zlib.crc32(payload)))
        off += len(payload) + _CRC.size
    return _HEAD.pack(MAGIC, VERSION, len(sections), 0) + b"".join(table) + b"".join(body)


def unpack_container(data: bytes) -> dict[str, bytes]:
    if len(data) < _HEAD.size:
        raise FormatError("file too short for an RST1 header")
    magic, version, count, _ = _HEAD.unpack_from(data, 0)
    if magic != MAGIC:
        raise FormatError("not an RST1 file")
    if version != VERSION:
        raise FormatError(f"unsupported format version {version}")
    out: dict[str, bytes] = {}
    for k in range(count):
        pos = _HEAD.size + k * _ENTRY.size
        if pos + _ENTRY.size > len(data):
            raise FormatError("truncated section table")
        name, off, length = _ENTRY.unpack_from(data, pos)
        tag = name.rstrip(b"\0").decode("ascii")
        end = off + length
        if end + _CRC.size > len(data):
            raise FormatError(f"section {tag} runs past the end of the file")
        payload = data[off:end]
        (crc,) = _CRC.unpack_from(data, end)
        if zlib.crc32(payload) != crc:
            raise FormatError(f"checksum mismatch in section {tag}")
        out[tag] = payload
    return out


def section_sizes(data: bytes) -> dict[str, int]:
    """Bytes attributed to each section; header and table go to ``HEADER``."""
    _, _, count, _ = _HEAD.unpack_from(data, 0)
    sizes = {"HEADER": _HEAD.size + count * _ENTRY.size}
    for k in range(count):
        name, _, length = _ENTRY.unpack_from(data, _HEAD.size + k * _ENTRY.size)
        sizes[name.rstrip(b"\0").decode("ascii")] = length + _CRC.size
    return sizes


def text_hash(text) -> str:
    return hashlib.sha256(np.ascontiguousarray(as_text(text), dtype="<i8").tobytes()).hexdigest()


def _meta(d: dict) -> bytes:
    return json.dumps(d, sort_keys=True, separators=(",", ":")).encode()


# --------------------------------------------------------------------------


@dataclass
class ReferenceSet:
    fm: FMIndex
    lcp: SLArray
    tokens: TokenMap
    dlcp_rev: FMIndex  # FM-index of the reversed, tokenized DLCP_R, used by RLZ parsing
    sha256: str
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.fm.n

    @classmethod
    def build(cls, text, fm_cfg: FMConfig | None = None, sx: SuffixStructures | None = None) -> "ReferenceSet":
        t = as_text(text)
        sx = sx or SuffixStructures.build(t)
        fm_cfg = fm_cfg or FMConfig()
        fm = FMIndex.build(t, fm_cfg, sa=sx.sa)
        d = dlcp(sx.lcp)
        tokens = TokenMap(d)
        rev = RLZMatcher.build_rev_index(d, tokens)
        meta = {"kind": "reference", "n": int(t.size), "sha256": text_hash(t), "fm": asdict(fm_cfg)}
        return cls(fm, sx.lcp_slarray(), tokens, rev, meta["sha256"], meta)

    def dlcp_matcher(self) -> RLZMatcher:
        return RLZMatcher(dlcp(self.lcp.to_numpy()), self.tokens, self.dlcp_rev)

    def to_bytes(self) -> bytes:
        return pack_container([
            ("META", _meta(self.meta)),
            ("FM", to_bytes(self.fm)),
            ("LCP", to_bytes(self.lcp)),
            ("DLCPTOK", to_bytes(self.tokens)),
            ("DLCPREV", to_bytes(self.dlcp_rev)),
        ])

    @classmethod
    def from_bytes(cls, data: bytes) -> "ReferenceSet":
        sec = unpack_container(data)
        try:
            meta = json.loads(sec["META"])
            if meta.get("kind") != "reference":
                raise FormatError("not a reference bundle")
            fm = from_bytes(FMIndex, sec["FM"])
            lcp = from_bytes(SLArray, sec["LCP"])
            tokens = from_bytes(TokenMap, sec["DLCPTOK"])
            rev = from_bytes(FMIndex, sec["DLCPREV"])
        except KeyError as e:
            raise FormatError(f"missing section {e}") from None
        if fm.n != len(lcp) or rev.n != fm.n + 1:
            raise FormatError("reference components disagree on length")
        return cls(fm, lcp, tokens, rev, meta["sha256"], meta)


@dataclass
class TargetSet:
    rfm: RelativeFM
    rlcp: RLCPArray
    rselect: RSelect | None
    meta: dict

    @classmethod
    def build(cls, ref: ReferenceSet, target_text, rfm_cfg: RFMConfig | None = None,
              rlz_cfg: RLZConfig | None = None, with_rselect: bool = False,
              ref_text=None, ref_sx: SuffixStructures | None = None) -> "TargetSet":
        t_s = as_text(target_text)
        missing = set(np.unique(t_s).tolist()) - set(ref.fm.symbols)
        if missing:
            raise ValueError(f"target symbols {sorted(missing)} do not occur in the reference")
        rfm_cfg = rfm_cfg or RFMConfig()
        rlz_cfg = rlz_cfg or RLZConfig(max_len=1024)
        t_r = as_text(ref_text) if ref_text is not None else ref.fm.text()
        sx_r = ref_sx or SuffixStructures.build(t_r)
        sx_s = SuffixStructures.build(t_s)
        rfm = RelativeFM.build(ref.fm, t_r, t_s, rfm_cfg, ref_sx=sx_r, tgt_sx=sx_s)
        rlcp = RLCPArray.build(ref.lcp, sx_s.lcp, ref.dlcp_matcher(), rlz_cfg)
        rs = RSelect.build(rfm, sx_r.bwt, sx_s.bwt) if with_rselect else None
        lcs = rfm_cfg.lcs
        meta = {
            "kind": "target", "n": int(t_s.size), "sha256": text_hash(t_s), "ref_sha256": ref.sha256,
            "rfm": {"full": rfm_cfg.full, "sa_rate": rfm_cfg.sa_rate, "isa_rate": rfm_cfg.isa_rate,
                    "lcs": asdict(lcs) if lcs else None},
            "rlz": asdict(rlz_cfg), "rselect": with_rselect,
        }
        return cls(rfm, rlcp, rs, meta)

    def to_bytes(self) -> bytes:
        sections = [("META", _meta(self.meta)), ("RFM", to_bytes(self.rfm)), ("RLCP", to_bytes(self.rlcp))]
        if self.rselect is not None:
            sections.append(("RSEL", to_bytes(self.rselect)))
        return pack_container(sections)

    @classmethod
    def from_bytes(cls, data: bytes, ref: ReferenceSet) -> "TargetSet":
        sec = unpack_container(data)
        try:
            meta = json.loads(sec["META"])
            if meta.get("kind") != "target":
                raise FormatError("not a target bundle")
            if meta["ref_sha256"] != ref.sha256:
                raise FormatError("target bundle was built against a different reference")
            rfm = from_bytes(RelativeFM, sec["RFM"]).attach(ref.fm)
            rlcp = from_bytes(RLCPArray, sec["RLCP"]).attach(ref.lcp)
            rs = from_bytes(RSelect, sec["RSEL"]) if "RSEL" in sec else None
        except KeyError as e:
            raise FormatError(f"missing section {e}") from None
        if rfm.n != rlcp.n:
            raise FormatError("RFM and RLCP disagree on target length")
        return cls(rfm, rlcp, rs, meta)

    def tree(self):
        from .rst import RelativeSuffixTree

        return RelativeSuffixTree(self.rfm, self.rlcp, self.rselect)


def save(obj, path) -> int:
    data = obj.to_bytes()
    Path(path).write_bytes(data)
    return len(data)


def load_reference(path) -> ReferenceSet:
    return ReferenceSet.from_bytes(Path(path).read_bytes())


def load_target(path, ref: ReferenceSet) -> TargetSet:
    return TargetSet.from_bytes(Path(path).read_bytes(), ref)

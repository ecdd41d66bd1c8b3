"""Annex-B scanning, NAL header parsing, classification and stream statistics.

Supports raw H.264/AVC and H.265/HEVC byte streams framed with 3-byte
(00 00 01) or 4-byte (00 00 00 01) start codes. Only the NAL header bytes
are interpreted, so emulation-prevention bytes never need stripping.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import (
    EmptyInput,
    ForbiddenBitSet,
    MalformedUnit,
    NoStartCode,
    OutOfRange,
    TooShort,
)

_START_CODE = b"\x00\x00\x01"


class Codec(enum.Enum):
    H264 = "h264"
    H265 = "h265"

    @property
    def header_size(self) -> int:
        return 1 if self is Codec.H264 else 2

    @property
    def max_nal_type(self) -> int:
        return 31 if self is Codec.H264 else 63


class NalClass(enum.Enum):
    IRAP_VCL = "irap_vcl"
    NON_IRAP_VCL = "non_irap_vcl"
    NON_VCL = "non_vcl"


@dataclass(frozen=True)
class NalHeader:
    nal_type: int
    # H.264 only
    ref_idc: int | None = None
    # H.265 only
    layer_id: int | None = None
    temporal_id_plus1: int | None = None


@dataclass(frozen=True)
class NalUnit:
    index: int
    byte_offset: int
    byte_len: int
    codec: Codec
    nal_type: int
    nal_class: NalClass


def parse_nal_header(header_bytes: bytes, codec: Codec) -> NalHeader:
    """Decode the one-byte (H.264) or two-byte (H.265) NAL unit header."""
    if len(header_bytes) < codec.header_size:
        raise TooShort(
            f"{codec.value} header needs {codec.header_size} byte(s), "
            f"got {len(header_bytes)}"
        )
    b0 = header_bytes[0]
    if b0 & 0x80:
        raise ForbiddenBitSet("forbidden_zero_bit is set in NAL header")
    if codec is Codec.H264:
        return NalHeader(nal_type=b0 & 0x1F, ref_idc=(b0 >> 5) & 0x3)
    b1 = header_bytes[1]
    return NalHeader(
        nal_type=(b0 >> 1) & 0x3F,
        layer_id=((b0 & 0x1) << 5) | (b1 >> 3),
        temporal_id_plus1=b1 & 0x7,
    )


def classify_nal(codec: Codec, nal_type: int) -> NalClass:
    """Map a NAL type code to its drop-priority class.

    H.265: 16-23 are random-access pictures, 0-31 are VCL, 32-63 non-VCL;
    reserved VCL codes 24-31 count as non-IRAP VCL. H.264: only type 5
    (IDR) is a random-access picture; 1-4 are non-IRAP slices.
    """
    if nal_type < 0 or nal_type > codec.max_nal_type:
        raise OutOfRange(f"nal_type {nal_type} out of range for {codec.value}")
    if codec is Codec.H265:
        if 16 <= nal_type <= 23:
            return NalClass.IRAP_VCL
        if nal_type <= 31:
            return NalClass.NON_IRAP_VCL
        return NalClass.NON_VCL
    if nal_type == 5:
        return NalClass.IRAP_VCL
    if 1 <= nal_type <= 4:
        return NalClass.NON_IRAP_VCL
    return NalClass.NON_VCL


def _start_code_positions(data: bytes) -> list[int]:
    positions = []
    i = data.find(_START_CODE)
    while i != -1:
        positions.append(i)
        i = data.find(_START_CODE, i + 3)
    return positions


def scan_annexb(data: bytes, codec: Codec) -> list[NalUnit]:
    """Split an Annex-B byte stream into classified NAL units.

    A unit runs from the byte after its start code to the byte before the
    next start code (zero padding in front of a start code is excluded, so
    both 3- and 4-byte forms are handled uniformly). Trailing zero padding
    at end of stream is ignored.
    """
    if not data:
        raise EmptyInput("byte stream is empty")
    positions = _start_code_positions(data)
    if not positions:
        raise NoStartCode("no Annex-B start code found")

    units: list[NalUnit] = []
    for k, pos in enumerate(positions):
        start = pos + 3
        if k + 1 < len(positions):
            end = positions[k + 1]
            # absorb the zero run preceding the next start code (4-byte
            # form and any extra padding)
            while end > start and data[end - 1] == 0:
                end -= 1
        else:
            end = len(data)
            while end > start and data[end - 1] == 0:
                end -= 1
        byte_len = end - start
        if byte_len < codec.header_size:
            raise MalformedUnit(
                f"unit at offset {start} has {byte_len} byte(s), "
                f"header needs {codec.header_size}"
            )
        header = parse_nal_header(data[start:end], codec)
        units.append(
            NalUnit(
                index=len(units),
                byte_offset=start,
                byte_len=byte_len,
                codec=codec,
                nal_type=header.nal_type,
                nal_class=classify_nal(codec, header.nal_type),
            )
        )
    return units


@dataclass
class StreamStats:
    nal_count: int
    bytes_per_nal: list[int]
    count_by_class: dict[NalClass, int]
    percent_by_class: dict[NalClass, float]
    count_by_type: dict[int, int]
    packets_per_nal: list[int] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        sizes = self.bytes_per_nal
        summary = {
            "min": min(sizes) if sizes else 0,
            "max": max(sizes) if sizes else 0,
            "mean": (sum(sizes) / len(sizes)) if sizes else 0.0,
            "total": sum(sizes),
        }
        out = {
            "nal_count": self.nal_count,
            "count_by_class": {c.value: n for c, n in self.count_by_class.items()},
            "percent_by_class": {c.value: p for c, p in self.percent_by_class.items()},
            "count_by_type": {str(t): n for t, n in sorted(self.count_by_type.items())},
            "bytes_per_nal_summary": summary,
        }
        if self.packets_per_nal:
            out["packets_per_nal_summary"] = {
                "min": min(self.packets_per_nal),
                "max": max(self.packets_per_nal),
                "mean": sum(self.packets_per_nal) / len(self.packets_per_nal),
                "total": sum(self.packets_per_nal),
            }
        return out


def stream_stats(units: list[NalUnit], payload_size: int | None = None) -> StreamStats:
    """Compute per-class / per-type counters over a unit list.

    When `payload_size` is given, also records how many packets each unit
    would occupy under that payload size.
    """
    count_by_class = {c: 0 for c in NalClass}
    count_by_type: dict[int, int] = {}
    bytes_per_nal: list[int] = []
    for u in units:
        count_by_class[u.nal_class] += 1
        count_by_type[u.nal_type] = count_by_type.get(u.nal_type, 0) + 1
        bytes_per_nal.append(u.byte_len)
    n = len(units)
    percent_by_class = {
        c: (100.0 * k / n if n else 0.0) for c, k in count_by_class.items()
    }
    packets_per_nal = []
    if payload_size is not None and payload_size >= 1:
        packets_per_nal = [-(-u.byte_len // payload_size) for u in units]
    return StreamStats(
        nal_count=n,
        bytes_per_nal=bytes_per_nal,
        count_by_class=count_by_class,
        percent_by_class=percent_by_class,
        count_by_type=count_by_type,
        packets_per_nal=packets_per_nal,
    )

"""Deterministic synthetic Annex-B stream generator.

Produces streams with a controllable GOP layout (IRAP every N frames) and
controllable NAL sizes, so parsing and simulation behavior can be tested
without a video corpus. Payloads are filled with 0xAA so no accidental
start codes can appear.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .bitstream import Codec, NalClass, NalUnit, classify_nal
from .errors import InvalidSpec

FILLER = 0xAA

_IRAP_TYPE = {Codec.H264: 5, Codec.H265: 19}
_NON_IRAP_TYPE = {Codec.H264: 1, Codec.H265: 1}
_PARAM_SET_TYPES = {Codec.H264: (7, 8), Codec.H265: (32, 33, 34)}
_PARAM_SET_BYTES = 16


@dataclass(frozen=True)
class SynthSpec:
    codec: Codec
    frame_count: int
    irap_period: int
    irap_nal_bytes: int
    non_irap_nal_bytes: int
    include_parameter_sets: bool = False
    seed: int = 0
    jitter_pct: float = 0.0

    def validate(self) -> None:
        hdr = self.codec.header_size
        if self.frame_count < 1:
            raise InvalidSpec("frame_count must be >= 1")
        if self.irap_period < 1:
            raise InvalidSpec("irap_period must be >= 1")
        if self.irap_nal_bytes < hdr or self.non_irap_nal_bytes < hdr:
            raise InvalidSpec(f"NAL sizes must be >= header size ({hdr})")
        if not 0 <= self.jitter_pct < 100:
            raise InvalidSpec("jitter_pct must be in [0, 100)")


def _header_bytes(codec: Codec, nal_type: int) -> bytes:
    if codec is Codec.H264:
        # ref_idc 3, forbidden bit 0
        return bytes([(3 << 5) | nal_type])
    # layer_id 0, temporal_id_plus1 1
    return bytes([nal_type << 1, 0x01])


def generate_stream(spec: SynthSpec) -> tuple[bytes, list[NalUnit]]:
    """Build the byte stream and the unit manifest it must scan back to.

    Parameter sets (when enabled) and IRAP frames get a 4-byte start code,
    other frames a 3-byte one, exercising both framings in round trips.
    """
    spec.validate()
    rng = random.Random(spec.seed)
    out = bytearray()
    units: list[NalUnit] = []

    def emit(nal_type: int, total_len: int, long_sc: bool) -> None:
        out.extend(b"\x00\x00\x00\x01" if long_sc else b"\x00\x00\x01")
        offset = len(out)
        header = _header_bytes(spec.codec, nal_type)
        out.extend(header)
        out.extend(bytes([FILLER]) * (total_len - len(header)))
        units.append(
            NalUnit(
                index=len(units),
                byte_offset=offset,
                byte_len=total_len,
                codec=spec.codec,
                nal_type=nal_type,
                nal_class=classify_nal(spec.codec, nal_type),
            )
        )

    if spec.include_parameter_sets:
        for t in _PARAM_SET_TYPES[spec.codec]:
            emit(t, _PARAM_SET_BYTES, long_sc=True)

    hdr = spec.codec.header_size
    for i in range(spec.frame_count):
        is_irap = i % spec.irap_period == 0
        nominal = spec.irap_nal_bytes if is_irap else spec.non_irap_nal_bytes
        size = nominal
        if spec.jitter_pct > 0:
            factor = 1.0 + rng.uniform(-spec.jitter_pct, spec.jitter_pct) / 100.0
            size = max(hdr, round(nominal * factor))
        nal_type = _IRAP_TYPE[spec.codec] if is_irap else _NON_IRAP_TYPE[spec.codec]
        emit(nal_type, size, long_sc=is_irap)

    return bytes(out), units


def irap_fraction(units: list[NalUnit]) -> float:
    """Share of VCL units that are IRAP."""
    vcl = [u for u in units if u.nal_class is not NalClass.NON_VCL]
    if not vcl:
        return 0.0
    return sum(u.nal_class is NalClass.IRAP_VCL for u in vcl) / len(vcl)

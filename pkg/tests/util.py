"""Small shared helpers for building packet streams in tests."""

from __future__ import annotations

from irapguard.bitstream import NalClass
from irapguard.packetizer import PacketDescriptor

CLASS_BY_LETTER = {
    "I": NalClass.IRAP_VCL,
    "N": NalClass.NON_IRAP_VCL,
    "V": NalClass.NON_VCL,
}

KIND_BY_LETTER = {"I": "irap", "N": "non_irap", "V": "non_vcl"}


def make_packets(pattern: str) -> list[PacketDescriptor]:
    """One single-packet NAL per letter: I=IRAP, N=non-IRAP, V=non-VCL."""
    return [
        PacketDescriptor(
            packet_id=i,
            nal_index=i,
            fragment_index=0,
            size_bytes=100,
            nal_class=CLASS_BY_LETTER[letter],
            is_last_of_nal=True,
        )
        for i, letter in enumerate(pattern)
    ]


def make_reference_packets(pattern: str) -> list[tuple[int, str]]:
    return [(i, KIND_BY_LETTER[letter]) for i, letter in enumerate(pattern)]

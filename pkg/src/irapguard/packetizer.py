"""Fragment NAL units into fixed-payload packets.

Each NAL unit becomes ceil(byte_len / payload_size) packets; packets never
carry bytes from two units, so every packet inherits one unambiguous drop
class. The unit list can be logically repeated to lengthen the stream.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bitstream import NalClass, NalUnit
from .errors import InvalidPayloadSize

DEFAULT_PAYLOAD_SIZE = 1400


@dataclass(slots=True)
class PacketDescriptor:
    packet_id: int
    nal_index: int  # index of the owning NAL instance (unique across repeats)
    fragment_index: int
    size_bytes: int
    nal_class: NalClass
    is_last_of_nal: bool


def packetize(
    units: list[NalUnit],
    payload_size: int = DEFAULT_PAYLOAD_SIZE,
    repeat: int = 1,
) -> list[PacketDescriptor]:
    if payload_size < 1:
        raise InvalidPayloadSize(f"payload_size must be >= 1, got {payload_size}")
    if repeat < 1:
        raise InvalidPayloadSize(f"repeat must be >= 1, got {repeat}")
    packets: list[PacketDescriptor] = []
    packet_id = 0
    nal_instance = 0
    for _ in range(repeat):
        for unit in units:
            remaining = unit.byte_len
            fragment = 0
            while remaining > 0:
                size = min(payload_size, remaining)
                remaining -= size
                packets.append(
                    PacketDescriptor(
                        packet_id=packet_id,
                        nal_index=nal_instance,
                        fragment_index=fragment,
                        size_bytes=size,
                        nal_class=unit.nal_class,
                        is_last_of_nal=remaining == 0,
                    )
                )
                packet_id += 1
                fragment += 1
            nal_instance += 1
    return packets


def packets_per_irap_nal_mean(
    units: list[NalUnit], payload_size: int = DEFAULT_PAYLOAD_SIZE
) -> float:
    """Mean packet count of the IRAP units; 0 when the stream has none."""
    counts = [
        -(-u.byte_len // payload_size)
        for u in units
        if u.nal_class is NalClass.IRAP_VCL
    ]
    if not counts:
        return 0.0
    return sum(counts) / len(counts)

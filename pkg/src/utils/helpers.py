"""
Small byte-level helpers shared by the protocols, the simulator and the games.
"""
import hashlib
import struct
from typing import Tuple


def xor_bytes(a: bytes, b: bytes) -> bytes:
    """XOR two equal-length byte strings."""
    if len(a) != len(b):
        raise ValueError(f"Cannot XOR {len(a)} bytes with {len(b)} bytes")
    return bytes(x ^ y for x, y in zip(a, b))


def flip_bit(data: bytes, bit_index: int) -> bytes:
    """Return a copy of data with one bit flipped (bit 0 is the MSB of byte 0)."""
    if not 0 <= bit_index < 8 * len(data):
        raise IndexError(f"Bit {bit_index} is outside a {len(data)}-byte string")
    mutated = bytearray(data)
    mutated[bit_index // 8] ^= 0x80 >> (bit_index % 8)
    return bytes(mutated)


def digest_hex(data: bytes, length: int = 16) -> str:
    """Short SHA-256 fingerprint used in logs and transcripts."""
    return hashlib.sha256(data).hexdigest()[:length]


def pack_u32(value: int) -> bytes:
    return struct.pack(">I", value)


def unpack_u32(data: bytes, offset: int) -> Tuple[int, int]:
    """Read a big-endian u32 at offset; returns (value, new offset)."""
    if offset + 4 > len(data):
        raise ValueError("Truncated length field")
    return struct.unpack_from(">I", data, offset)[0], offset + 4


def take(data: bytes, offset: int, length: int) -> Tuple[bytes, int]:
    """Slice exactly `length` bytes at offset; returns (chunk, new offset)."""
    if length < 0 or offset + length > len(data):
        raise ValueError(f"Need {length} bytes at offset {offset}, have {len(data) - offset}")
    return data[offset:offset + length], offset + length

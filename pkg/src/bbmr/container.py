"""The ``.bbmr`` container: a scale plan plus its mixed-resolution payload.

Byte layout (all integers little-endian):

    offset  size  field
    0       4     magic "BBMR"
    4       1     version (currently 1)
    5       1     flags (0; a bit is reserved for future per-block compression)
    6       4     orig_w
    10      4     orig_h
    14      2     block_w
    16      2     block_h
    18      1     k1
    19      1     k2
    20      1     k3
    21      1     color (0 = 8-bit RGB)
    22      4     n_blocks
    26      n_blocks        plan: one byte per block, 0 -> k1, 1 -> k2, 2 -> k3
    ...     payload         raw RGB8 rasters of each LR block, row-major block
                            order, each (block_w/k) * (block_h/k) * 3 bytes
    last 4  CRC-32 (IEEE) of plan + payload

The layout is fixed-width and uncompressed on purpose: the payload length is
then a direct measurement of the stored pixel budget, and any plan that is
pixel-neutral against the uniform baseline produces a byte-identical payload
size.  Each malformed-stream condition raises its own exception class.
"""

import math
import struct
import zlib
from dataclasses import dataclass

import numpy as np

MAGIC = b"BBMR"
VERSION = 1
COLOR_RGB8 = 0

_HEADER = struct.Struct("<4sBBIIHHBBBBI")
HEADER_SIZE = _HEADER.size  # 26
CRC_SIZE = 4


class ContainerError(Exception):
    """Base class for every container failure."""


class BadMagicError(ContainerError):
    pass


class UnsupportedVersionError(ContainerError):
    pass


class TruncatedStreamError(ContainerError):
    pass


class ChecksumMismatchError(ContainerError):
    pass


class FormatError(ContainerError):
    """Header or plan violates a structural invariant."""


@dataclass(frozen=True)
class ContainerHeader:
    orig_w: int
    orig_h: int
    block_w: int
    block_h: int
    k1: int
    k2: int
    k3: int
    n_blocks: int
    flags: int = 0
    color: int = COLOR_RGB8

    @property
    def factors(self) -> tuple[int, int, int]:
        return (self.k1, self.k2, self.k3)

    def validate(self) -> None:
        if self.orig_w < 1 or self.orig_h < 1:
            raise FormatError("image dimensions must be positive")
        if self.block_w < 1 or self.block_h < 1:
            raise FormatError("block dimensions must be positive")
        if not (1 <= self.k1 < self.k2 < self.k3):
            raise FormatError(
                f"factors must be increasing, got ({self.k1}, {self.k2}, {self.k3})")
        if self.block_w % self.k3 or self.block_h % self.k3:
            raise FormatError(
                f"block {self.block_h}x{self.block_w} not divisible by k3={self.k3}")
        if self.color != COLOR_RGB8:
            raise FormatError(f"unsupported color mode {self.color}")
        expected = math.ceil(self.orig_w / self.block_w) * \
            math.ceil(self.orig_h / self.block_h)
        if self.n_blocks != expected:
            raise FormatError(
                f"n_blocks={self.n_blocks} inconsistent with grid ({expected} expected)")

    def block_shape(self, code: int) -> tuple[int, int]:
        """(height, width) of an LR block for scale code 1, 2 or 3."""
        k = (self.k1, self.k2, self.k3)[code - 1]
        return self.block_h // k, self.block_w // k

    def pack(self) -> bytes:
        return _HEADER.pack(MAGIC, VERSION, self.flags, self.orig_w, self.orig_h,
                            self.block_w, self.block_h, self.k1, self.k2, self.k3,
                            self.color, self.n_blocks)


def _check_plan(header: ContainerHeader, codes) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64).ravel()
    if codes.size != header.n_blocks:
        raise FormatError(
            f"plan has {codes.size} entries for {header.n_blocks} blocks")
    if codes.size and (codes.min() < 1 or codes.max() > 3):
        raise FormatError("plan codes must be 1, 2 or 3")
    return codes


def container_size(codes, header: ContainerHeader) -> int:
    """Exact serialized byte length without materializing the stream."""
    header.validate()
    if header.n_blocks == 0:
        raise FormatError("empty plan")
    codes = _check_plan(header, codes)
    payload = 0
    for code in codes:
        bh, bw = header.block_shape(int(code))
        payload += bh * bw * 3
    return HEADER_SIZE + header.n_blocks + payload + CRC_SIZE


def encode(header: ContainerHeader, codes, lr_blocks: list[np.ndarray]) -> bytes:
    """Serialize a plan and its LR blocks; identical inputs give identical bytes."""
    header.validate()
    codes = _check_plan(header, codes)
    if len(lr_blocks) != header.n_blocks:
        raise FormatError(
            f"{len(lr_blocks)} blocks supplied for {header.n_blocks} plan entries")
    chunks = [bytes(int(c) - 1 for c in codes)]
    for i, (code, block) in enumerate(zip(codes, lr_blocks)):
        expected = header.block_shape(int(code)) + (3,)
        block = np.asarray(block)
        if block.shape != expected or block.dtype != np.uint8:
            raise FormatError(
                f"block {i}: expected uint8 {expected}, got {block.dtype} {block.shape}")
        chunks.append(np.ascontiguousarray(block).tobytes())
    body = b"".join(chunks)
    crc = zlib.crc32(body) & 0xFFFFFFFF
    return header.pack() + body + struct.pack("<I", crc)


def decode(stream: bytes) -> tuple[ContainerHeader, np.ndarray, list[np.ndarray]]:
    """Exact inverse of :func:`encode`.

    Validates magic, version, structural invariants, payload length, and the
    CRC before returning (header, plan codes in {1,2,3}, LR blocks).
    """
    if len(stream) < HEADER_SIZE:
        raise TruncatedStreamError(
            f"stream is {len(stream)} bytes, header needs {HEADER_SIZE}")
    magic, version, flags, orig_w, orig_h, block_w, block_h, k1, k2, k3, color, \
        n_blocks = _HEADER.unpack_from(stream, 0)
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r}")
    if version != VERSION:
        raise UnsupportedVersionError(f"unsupported version {version}")
    if flags != 0:
        raise FormatError(f"unknown flags 0x{flags:02x}")
    header = ContainerHeader(orig_w=orig_w, orig_h=orig_h, block_w=block_w,
                             block_h=block_h, k1=k1, k2=k2, k3=k3,
                             n_blocks=n_blocks, flags=flags, color=color)
    header.validate()

    plan_end = HEADER_SIZE + n_blocks
    if len(stream) < plan_end:
        raise TruncatedStreamError("stream ends inside the plan")
    wire_codes = np.frombuffer(stream, dtype=np.uint8,
                               count=n_blocks, offset=HEADER_SIZE)
    if wire_codes.size and wire_codes.max() > 2:
        raise FormatError("plan codes must be 0, 1 or 2 on the wire")
    codes = wire_codes.astype(np.int8) + 1

    payload_len = sum(
        h * w * 3 for h, w in (header.block_shape(int(c)) for c in codes))
    expected_len = plan_end + payload_len + CRC_SIZE
    if len(stream) < expected_len:
        raise TruncatedStreamError(
            f"stream is {len(stream)} bytes, layout requires {expected_len}")
    if len(stream) > expected_len:
        raise FormatError(
            f"{len(stream) - expected_len} trailing bytes after the checksum")

    body = stream[HEADER_SIZE:plan_end + payload_len]
    (stored_crc,) = struct.unpack_from("<I", stream, plan_end + payload_len)
    actual_crc = zlib.crc32(body) & 0xFFFFFFFF
    if stored_crc != actual_crc:
        raise ChecksumMismatchError(
            f"crc mismatch: stored 0x{stored_crc:08x}, computed 0x{actual_crc:08x}")

    blocks = []
    offset = plan_end
    for code in codes:
        bh, bw = header.block_shape(int(code))
        n = bh * bw * 3
        block = np.frombuffer(stream, dtype=np.uint8, count=n, offset=offset)
        blocks.append(block.reshape(bh, bw, 3).copy())
        offset += n
    return header, codes, blocks

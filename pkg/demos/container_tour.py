#!/usr/bin/env python3
"""A guided walk through the .bbmr container bytes.

Compresses a small synthetic image, dumps the 26-byte header field by
field, decodes it back bit-exactly, then corrupts the stream in each of
the ways the decoder refuses and prints the exception it raises.
"""

import struct

from bbmr import PipelineConfig, compress, decode
from bbmr.container import CRC_SIZE, HEADER_SIZE
from bbmr.synthetic import half_and_half_image

image = half_and_half_image(256, seed=7)
config = PipelineConfig(block_w=64, block_h=64)
result = compress(image, config)
data = result.to_bytes()

# ---------------------------------------------------------------------------
# the header, field by field
# ---------------------------------------------------------------------------
fields = struct.unpack("<4sBBIIHHBBBBI", data[:HEADER_SIZE])
names = ("magic", "version", "flags", "orig_w", "orig_h", "block_w",
         "block_h", "k1", "k2", "k3", "color", "n_blocks")
print(f"{len(data)} bytes total: {HEADER_SIZE} header + "
      f"{fields[-1]} plan + payload + {CRC_SIZE} crc")
for name, value in zip(names, fields):
    print(f"  {name:9s} {value!r}")
print()

plan_bytes = data[HEADER_SIZE:HEADER_SIZE + fields[-1]]
print(f"plan bytes (0 = fine, 1 = mid, 2 = coarse): {list(plan_bytes)}")
print()

# ---------------------------------------------------------------------------
# decode is the exact inverse
# ---------------------------------------------------------------------------
header, codes, blocks = decode(data)
sizes = sorted({b.shape[:2] for b in blocks})
print(f"decoded {len(blocks)} blocks, LR sizes {sizes}")
print()

# ---------------------------------------------------------------------------
# every corruption style has its own refusal
# ---------------------------------------------------------------------------
corruptions = [
    ("wrong magic", b"JUNK" + data[4:]),
    ("future version", data[:4] + b"\x07" + data[5:]),
    ("truncated stream", data[:len(data) // 3]),
    ("flipped payload bit",
     data[:100] + bytes([data[100] ^ 0x01]) + data[101:]),
]
for label, bad in corruptions:
    try:
        decode(bad)
        print(f"  {label}: accepted (should not happen)")
    except Exception as exc:
        print(f"  {label}: {type(exc).__name__}: {exc}")

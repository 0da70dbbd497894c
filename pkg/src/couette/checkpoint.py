"""Binary checkpoint format for spectral fields.

Byte layout (all values little-endian):

    offset  size  field
    0       4     magic bytes b"CTL1"
    4       8     nx   (int64)
    12      8     ny   (int64)
    20      8     lx   (float64)
    28      8     ly   (float64)
    36      8     t    (float64)
    44      8     nu   (float64)
    52      ...   coefficients, row-major over (k-index, xi-index),
                  interleaved re/im float64 (nx * ny * 16 bytes)
"""
from __future__ import annotations

import struct

import numpy as np

from .errors import ValidationError
from .grid import SpectralField, make_grid

MAGIC = b"CTL1"
_HEADER = struct.Struct("<4sqqdddd")


def save_checkpoint(path, field, t, nu):
    g = field.grid
    header = _HEADER.pack(MAGIC, g.nx, g.ny, g.lx, g.ly, float(t), float(nu))
    flat = np.empty(g.nx * g.ny * 2, dtype="<f8")
    flat[0::2] = field.coeffs.real.ravel(order="C")
    flat[1::2] = field.coeffs.imag.ravel(order="C")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(flat.tobytes())


def load_checkpoint(path):
    """Read a checkpoint; returns (field, t, nu)."""
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        if len(raw) < _HEADER.size:
            raise ValidationError(f"{path}: truncated checkpoint header")
        magic, nx, ny, lx, ly, t, nu = _HEADER.unpack(raw)
        if magic != MAGIC:
            raise ValidationError(f"{path}: bad magic {magic!r}")
        body = fh.read(nx * ny * 16)
    if len(body) != nx * ny * 16:
        raise ValidationError(f"{path}: truncated checkpoint body")
    flat = np.frombuffer(body, dtype="<f8")
    coeffs = (flat[0::2] + 1j * flat[1::2]).reshape(nx, ny)
    grid = make_grid(nx, ny, lx, ly)
    return SpectralField(grid, coeffs.copy()), t, nu

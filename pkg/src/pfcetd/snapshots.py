"""Binary state files: portable snapshots and exact-restart checkpoints.

A snapshot is the interchange format for a single field::

    PFCSNAP1\\n
    dim N L epsilon tau step time mean\\n
    <N**dim little-endian float64 values, row-major (last axis fastest)>

The header line is space-separated decimal; floats are written with 17
significant digits so they parse back to the identical double, making a
write/read round trip bit-exact.  ``mean`` is the spatial mean of the
payload, recorded so consumers can sanity-check files without reading the
payload.

A checkpoint additionally captures what a snapshot cannot: the working DFT
coefficient array of the driver (so a resumed run continues bit-identically,
transform roundoff included), the resolved stabilisation strength, the
running max-norm, and the byte offset reached in the CSV series.  Layout::

    PFCCHK1\\n
    <one JSON line of metadata>\\n
    <N**dim little-endian complex128 coefficients, row-major>

Both writers go through a temporary file and an atomic rename, so a killed
process never leaves a truncated file under the final name.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .grid import GridSpec

__all__ = [
    "SnapshotHeader",
    "write_snapshot",
    "read_snapshot",
    "write_checkpoint",
    "read_checkpoint",
]

SNAPSHOT_MAGIC = b"PFCSNAP1\n"
CHECKPOINT_MAGIC = b"PFCCHK1\n"


@dataclass(frozen=True)
class SnapshotHeader:
    """Parsed header line of a snapshot file (field order is fixed)."""

    dim: int
    n: int
    length: float
    epsilon: float
    dt: float
    step: int
    time: float
    mean: float

    def spec(self) -> GridSpec:
        return GridSpec(dim=self.dim, n=self.n, length=self.length)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _atomic_write(path, blobs):
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        for blob in blobs:
            fh.write(blob)
    os.replace(tmp, path)


def write_snapshot(path, values: np.ndarray, header: SnapshotHeader) -> None:
    if values.shape != header.spec().shape:
        raise ValueError(
            f"payload shape {values.shape} does not match header {header}"
        )
    line = " ".join(
        (
            str(header.dim),
            str(header.n),
            _fmt(header.length),
            _fmt(header.epsilon),
            _fmt(header.dt),
            str(header.step),
            _fmt(header.time),
            _fmt(header.mean),
        )
    )
    payload = np.ascontiguousarray(values, dtype="<f8").tobytes()
    _atomic_write(path, (SNAPSHOT_MAGIC, line.encode() + b"\n", payload))


def read_snapshot(path) -> tuple[SnapshotHeader, np.ndarray]:
    with open(path, "rb") as fh:
        magic = fh.read(len(SNAPSHOT_MAGIC))
        if magic != SNAPSHOT_MAGIC:
            raise ValueError(f"{path}: not a snapshot file")
        fields = fh.readline().decode().split()
        if len(fields) != 8:
            raise ValueError(f"{path}: malformed snapshot header")
        header = SnapshotHeader(
            dim=int(fields[0]),
            n=int(fields[1]),
            length=float(fields[2]),
            epsilon=float(fields[3]),
            dt=float(fields[4]),
            step=int(fields[5]),
            time=float(fields[6]),
            mean=float(fields[7]),
        )
        payload = fh.read()
    expected = header.n**header.dim * 8
    if len(payload) != expected:
        raise ValueError(
            f"{path}: payload is {len(payload)} bytes, header implies {expected}"
        )
    values = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    return header, values.reshape(header.spec().shape)


def snapshot_mean(values: np.ndarray) -> float:
    """Compensated spatial mean used when writing headers."""
    return math.fsum(np.asarray(values, dtype=np.float64).ravel()) / values.size


def write_checkpoint(path, meta: dict, coeffs: np.ndarray) -> None:
    blob = json.dumps(meta, sort_keys=True).encode() + b"\n"
    payload = np.ascontiguousarray(coeffs, dtype="<c16").tobytes()
    _atomic_write(path, (CHECKPOINT_MAGIC, blob, payload))


def read_checkpoint(path) -> tuple[dict, np.ndarray]:
    with open(path, "rb") as fh:
        magic = fh.read(len(CHECKPOINT_MAGIC))
        if magic != CHECKPOINT_MAGIC:
            raise ValueError(f"{path}: not a checkpoint file")
        meta = json.loads(fh.readline().decode())
        payload = fh.read()
    dim, n = int(meta["dim"]), int(meta["N"])
    expected = n**dim * 16
    if len(payload) != expected:
        raise ValueError(
            f"{path}: payload is {len(payload)} bytes, metadata implies {expected}"
        )
    coeffs = np.frombuffer(payload, dtype="<c16").astype(np.complex128)
    return meta, coeffs.reshape((n,) * dim)

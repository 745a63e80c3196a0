"""JSON state and channel files.

State file::

    {"dim": d, "matrix": [[[re, im], ...], ...]}

Channel file::

    {"dim": d, "kraus": [matrix, ...]}

with every matrix row-major and every entry a ``[re, im]`` pair.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import KrausChannel
from .operators import InvalidStateError, as_density


class FileFormatError(ValueError):
    pass


def matrix_to_json(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(obj, dim: int) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"matrix entries must be [re, im] pairs: {exc}") from None
    if arr.shape != (dim, dim, 2):
        raise FileFormatError(f"matrix has shape {arr.shape[:-1] if arr.ndim else ()}, expected ({dim}, {dim})")
    return arr[..., 0] + 1j * arr[..., 1]


def _read(path) -> dict:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(obj, dict) or "dim" not in obj:
        raise FileFormatError(f"{path}: expected an object with a 'dim' field")
    return obj


def state_from_dict(obj: dict) -> np.ndarray:
    dim = int(obj["dim"])
    if "matrix" not in obj:
        raise FileFormatError("state object lacks 'matrix'")
    return as_density(matrix_from_json(obj["matrix"], dim))


def load_state(path) -> np.ndarray:
    """Read and validate a density operator; raises InvalidStateError or FileFormatError."""
    try:
        return state_from_dict(_read(path))
    except InvalidStateError as exc:
        raise InvalidStateError(f"{path}: {exc}") from None


def save_state(path, rho: np.ndarray) -> None:
    rho = np.asarray(rho)
    Path(path).write_text(json.dumps({"dim": rho.shape[0], "matrix": matrix_to_json(rho)}))


def load_channel(path) -> KrausChannel:
    obj = _read(path)
    dim = int(obj["dim"])
    if "kraus" not in obj or not obj["kraus"]:
        raise FileFormatError(f"{path}: channel object lacks a non-empty 'kraus' list")
    return KrausChannel(tuple(matrix_from_json(k, dim) for k in obj["kraus"]))


def save_channel(path, channel: KrausChannel) -> None:
    Path(path).write_text(
        json.dumps({"dim": channel.dim, "kraus": [matrix_to_json(k) for k in channel.kraus]})
    )

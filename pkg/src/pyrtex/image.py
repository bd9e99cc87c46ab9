"""Image buffers, file I/O and quality metrics.

Images are plain numpy arrays of shape (H, W, C) with C in {1, 3} and
float64 samples in [0, 1]. Laplacian levels use the same layout but carry
signed values. Functions accept (H, W) grayscale arrays and promote them.
"""

from __future__ import annotations

import math
from pathlib import Path

import cv2
import numpy as np


class ContractError(ValueError):
    """A precondition of a library call was violated."""


class FormatError(ValueError):
    """The file is not in a supported image format."""


LDR_SUFFIXES = {".png", ".ppm", ".pgm", ".pnm"}
HDR_SUFFIXES = {".hdr", ".pic", ".pfm"}


def as_image(img) -> np.ndarray:
    """Return `img` as a float64 (H, W, C) array, validating the layout."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3 or arr.shape[2] not in (1, 3):
        raise ContractError(f"expected (H, W), (H, W, 1) or (H, W, 3), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ContractError(f"empty image {arr.shape}")
    return arr


def like_input(out: np.ndarray, ref) -> np.ndarray:
    """Drop the channel axis again if `ref` was a 2-D grayscale array."""
    return out[:, :, 0] if np.ndim(ref) == 2 else out


def clamp01(img: np.ndarray) -> np.ndarray:
    return np.clip(img, 0.0, 1.0)


def _to_rgb_order(arr: np.ndarray) -> np.ndarray:
    if arr.ndim == 2:
        return arr[:, :, None]
    if arr.shape[2] == 4:
        arr = arr[:, :, :3]
    elif arr.shape[2] == 2:  # gray + alpha
        return arr[:, :, :1]
    return arr[:, :, ::-1]


def _read(path: Path) -> np.ndarray:
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    # np.fromfile + imdecode keeps non-ASCII paths working.
    raw = np.fromfile(str(path), dtype=np.uint8)
    arr = cv2.imdecode(raw, cv2.IMREAD_UNCHANGED)
    if arr is None:
        raise FormatError(f"cannot decode {path}")
    return arr


def load_image(path) -> np.ndarray:
    """Load an 8- or 16-bit PNG, PPM (P6) or PGM (P5) as a [0, 1] image.

    Alpha channels are dropped; grayscale stays single-channel.
    """
    path = Path(path)
    if path.suffix.lower() not in LDR_SUFFIXES:
        raise FormatError(f"unsupported format {path.suffix!r}; use PNG, PPM or PGM")
    arr = _read(path)
    if arr.dtype == np.uint8:
        scale = 255.0
    elif arr.dtype == np.uint16:
        scale = 65535.0
    else:
        raise FormatError(f"unsupported sample type {arr.dtype} in {path}")
    return np.ascontiguousarray(_to_rgb_order(arr), dtype=np.float64) / scale


def quantize8(img) -> np.ndarray:
    """Clamp to [0, 1] and map to uint8 with round-half-away-from-zero."""
    v = clamp01(as_image(img)) * 255.0
    return np.floor(v + 0.5).astype(np.uint8)


def save_image(img, path) -> None:
    """Write an 8-bit PNG/PPM/PGM. Values are clamped and rounded to v*255."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix not in LDR_SUFFIXES:
        raise FormatError(f"unsupported format {path.suffix!r}; use PNG, PPM or PGM")
    q = quantize8(img)
    if suffix == ".pgm" and q.shape[2] != 1:
        raise FormatError("PGM output needs a single-channel image")
    if suffix == ".ppm" and q.shape[2] != 3:
        q = np.repeat(q, 3, axis=2)
    data = q[:, :, 0] if q.shape[2] == 1 else q[:, :, ::-1]
    ok, buf = cv2.imencode(suffix if suffix != ".pnm" else ".ppm", np.ascontiguousarray(data))
    if not ok:
        raise FormatError(f"encoder failed for {path}")
    try:
        buf.tofile(str(path))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def load_hdr(path) -> np.ndarray:
    """Load linear radiance from a Radiance RGBE (.hdr) or PFM file."""
    path = Path(path)
    if path.suffix.lower() not in HDR_SUFFIXES:
        raise FormatError(f"unsupported HDR format {path.suffix!r}; use .hdr or .pfm")
    arr = _read(path)
    if arr.dtype != np.float32:
        raise FormatError(f"{path} does not hold float samples")
    return np.ascontiguousarray(_to_rgb_order(arr), dtype=np.float64)


def save_hdr(img, path) -> None:
    path = Path(path)
    if path.suffix.lower() not in HDR_SUFFIXES:
        raise FormatError(f"unsupported HDR format {path.suffix!r}; use .hdr or .pfm")
    arr = as_image(img).astype(np.float32)
    if arr.shape[2] == 1:
        arr = np.repeat(arr, 3, axis=2)
    ok, buf = cv2.imencode(path.suffix.lower(), np.ascontiguousarray(arr[:, :, ::-1]))
    if not ok:
        raise FormatError(f"encoder failed for {path}")
    buf.tofile(str(path))


def _check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ContractError(f"shape mismatch: {a.shape} vs {b.shape}")


def mse(a, b) -> float:
    a, b = as_image(a), as_image(b)
    _check_same_shape(a, b)
    return float(np.mean((a - b) ** 2))


def psnr(a, b) -> float:
    """Peak signal-to-noise ratio in dB for unit peak; inf for identical inputs."""
    err = mse(a, b)
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / err)


def max_abs_diff(a, b) -> float:
    a, b = as_image(a), as_image(b)
    _check_same_shape(a, b)
    return float(np.max(np.abs(a - b)))


def total_variation(img) -> float:
    """Anisotropic total variation, summed over channels."""
    a = as_image(img)
    return float(np.abs(np.diff(a, axis=0)).sum() + np.abs(np.diff(a, axis=1)).sum())

"""Interpolation-free image-domain operations: FFT shifts, shears, rotation.

All arrays are indexed [ix, iy] with centered coordinate grids (physical
zero at index n // 2).  A rotation is decomposed into quarter-turns plus a
residual |angle| <= 45 degrees realized with three FFT shears, so nothing
here ever interpolates; every step is a unitary multiply in a transform
domain and is exact for band-limited content.
"""

from __future__ import annotations

import numpy as np

from .chirpscale import crop_centered, dual_step, ft, grid, ift, pad_centered, pad_length


def fourier_shift(img: np.ndarray, shift_xy, dx: float, dy: float) -> np.ndarray:
    """Circularly shift image content by a (possibly fractional) offset in meters."""
    sx, sy = shift_xy
    out = img
    if sx != 0.0:
        f = grid(img.shape[0], dual_step(img.shape[0], dx))
        out = ift(ft(out, axis=0) * np.exp(-2j * np.pi * f * sx)[:, None], axis=0)
    if sy != 0.0:
        f = grid(img.shape[1], dual_step(img.shape[1], dy))
        out = ift(ft(out, axis=1) * np.exp(-2j * np.pi * f * sy)[None, :], axis=1)
    return out


def shear_x(img: np.ndarray, kappa: float, dx: float, dy: float) -> np.ndarray:
    """Resample at (x + kappa*y, y): per-row shift of -kappa*y via an FFT ramp."""
    if kappa == 0.0:
        return img
    f = grid(img.shape[0], dual_step(img.shape[0], dx))
    y = grid(img.shape[1], dy)
    spec = ft(img, axis=0)
    spec *= np.exp(2j * np.pi * np.outer(f, kappa * y))
    return ift(spec, axis=0)


def shear_y(img: np.ndarray, kappa: float, dx: float, dy: float) -> np.ndarray:
    """Resample at (x, y + kappa*x)."""
    if kappa == 0.0:
        return img
    f = grid(img.shape[1], dual_step(img.shape[1], dy))
    x = grid(img.shape[0], dx)
    spec = ft(img, axis=1)
    spec *= np.exp(2j * np.pi * np.outer(kappa * x, f))
    return ift(spec, axis=1)


def _rot90_ccw(img: np.ndarray) -> np.ndarray:
    """Quarter-turn about the centered origin: J(x, y) = I(y, -x).

    Index map: J[ix, iy] = I[iy, (n - ix) mod n], which keeps the center
    sample n // 2 fixed on even-length grids (the extreme negative
    coordinate wraps, which is harmless for padded content).
    """
    n0 = img.shape[0]
    j = img.transpose(1, 0)                   # J'[a, b] = I[b, a]
    j = np.roll(j[:, ::-1], 1 - (n0 % 2), axis=1)
    return j


def rotate_image(img: np.ndarray, angle: float, dx: float, dy: float,
                 pad: bool = True) -> np.ndarray:
    """Rotate content counterclockwise by ``angle`` about the grid center.

    Output samples satisfy J(p) = I(R(-angle) p).  Requires dx == dy.
    With ``pad`` the image is zero-padded first so sheared content cannot
    wrap; the result is cropped back to the input shape.
    """
    if abs(dx - dy) > 1e-12 * abs(dx):
        raise ValueError("rotation requires square pixels")
    k90 = int(np.round(angle / (np.pi / 2)))
    residual = angle - k90 * np.pi / 2
    n0, n1 = img.shape
    out = img
    if pad and abs(residual) > 1e-12:
        t = abs(np.tan(residual / 2.0))
        s = abs(np.sin(residual))
        growth = 1.0 + t + s * (1.0 + t) + t * (1.0 + s * (1.0 + t))
        n_pad = pad_length(max(n0, n1), min_factor=max(1.05, growth))
        out = pad_centered(pad_centered(out, n_pad, 0), n_pad, 1)
    for _ in range(k90 % 4):
        out = _rot90_ccw(out)
    if abs(residual) > 1e-12:
        t = -np.tan(residual / 2.0)
        s = np.sin(residual)
        # R(-residual) = Sx(t) Sy(-s) Sx(t) applied as successive resamplings
        out = shear_x(out, t, dx, dy)
        out = shear_y(out, -s, dx, dy)
        out = shear_x(out, t, dx, dy)
    if pad and out.shape != (n0, n1):
        out = crop_centered(crop_centered(out, n0, 0), n1, 1)
    return out


def kaiser_sinc_kernel(m_taps: int, beta: float = 8.0):
    """Tap offsets and a weight function for windowed-sinc interpolation."""
    offs = np.arange(m_taps) - (m_taps // 2 - 1)

    def weights(frac: np.ndarray) -> np.ndarray:
        # frac in [0, 1); taps at offs - frac sample offsets
        u = offs[None, :] - frac[..., None]
        w = np.sinc(u) * np.i0(beta * np.sqrt(np.maximum(0.0, 1.0 - (u / (m_taps / 2.0)) ** 2))) / np.i0(beta)
        return w

    return offs, weights


def interp_columns(data: np.ndarray, positions: np.ndarray, m_taps: int = 16,
                   beta: float = 8.0) -> np.ndarray:
    """Windowed-sinc interpolation of each column at fractional row positions.

    ``data`` is (n, cols); ``positions`` is (n_out, cols) in fractional row
    units.  Out-of-range taps contribute zero.
    """
    n, cols = data.shape
    offs, weights = kaiser_sinc_kernel(m_taps, beta)
    base = np.floor(positions).astype(int)
    frac = positions - base
    w = weights(frac)                                    # (n_out, cols, m)
    idx = base[..., None] + offs[None, None, :]          # (n_out, cols, m)
    valid = (idx >= 0) & (idx < n)
    idx = np.clip(idx, 0, n - 1)
    cols_idx = np.broadcast_to(np.arange(cols)[None, :, None], idx.shape)
    vals = data[idx, cols_idx]
    return np.sum(vals * w * valid, axis=-1)

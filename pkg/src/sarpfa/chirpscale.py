"""Chirp-scaling resampling engine.

Replaces every wavenumber-domain interpolation of the polar-format
pipeline with unit-modulus multiplies and FFTs.  Two concrete transforms
are built from one algebraic core:

* range scaling (per pulse): consumes the raw dechirped signal, removes
  the residual video phase as a by-product and evaluates the deramped
  signal at ``xi * tau + beta / K_r``, i.e. scales the fast-time /
  range-frequency axis;
* azimuth scaling (per range-frequency row): a rechirp followed by the
  scaling sandwich, producing the azimuth Fourier transform of the
  time-scaled row (the keystone-to-rectangle step).

Angles are always taken relative to the aperture-center line of sight, so
the scale factors stay within a few 1e-3 of unity and the intermediate
chirps remain far below Nyquist at any frame azimuth; the ground-frame
rotation is applied afterwards in the image domain by exact FFT shears
(see imageops).

Sign conventions: forward transform kernel exp(-j 2 pi f t), centered
grids (coordinate 0 at index n // 2), orthonormal scaling, so every stage
is unitary and the chains preserve signal energy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, ParameterError
from .geometry import ApertureGeometry, RadarParams

PAD_FACTOR = 1.2  # minimum zero-padding before rounding up to a power of two


# ---------------------------------------------------------------------------
# centered transforms and padding


def ft(x: np.ndarray, axis: int = -1) -> np.ndarray:
    """Centered forward FFT, kernel exp(-j 2 pi f t), orthonormal."""
    return np.fft.fftshift(
        np.fft.fft(np.fft.ifftshift(x, axes=axis), axis=axis, norm="ortho"), axes=axis)


def ift(x: np.ndarray, axis: int = -1) -> np.ndarray:
    """Centered inverse FFT, kernel exp(+j 2 pi f t), orthonormal."""
    return np.fft.fftshift(
        np.fft.ifft(np.fft.ifftshift(x, axes=axis), axis=axis, norm="ortho"), axes=axis)


def grid(n: int, step: float) -> np.ndarray:
    """Centered coordinate grid: index n//2 maps to 0."""
    return (np.arange(n) - n // 2) * step


def dual_step(n: int, step: float) -> float:
    """Sample spacing of the conjugate grid."""
    return 1.0 / (n * step)


def pad_length(n: int, min_factor: float = PAD_FACTOR, min_extra: int = 0) -> int:
    """Next power of two >= min_factor * n, grown further by min_extra samples."""
    target = max(int(np.ceil(n * min_factor)), n + min_extra)
    return 1 << int(np.ceil(np.log2(target)))


def pad_centered(x: np.ndarray, n_out: int, axis: int) -> np.ndarray:
    """Zero-pad so the old center index n//2 lands on the new one."""
    n = x.shape[axis]
    if n_out < n:
        raise ParameterError("pad_centered cannot shrink an axis")
    left = n_out // 2 - n // 2
    pads = [(0, 0)] * x.ndim
    pads[axis] = (left, n_out - n - left)
    return np.pad(x, pads)


def crop_centered(x: np.ndarray, n_out: int, axis: int) -> np.ndarray:
    """Inverse of pad_centered."""
    n = x.shape[axis]
    left = n // 2 - n_out // 2
    sl = [slice(None)] * x.ndim
    sl[axis] = slice(left, left + n_out)
    return x[tuple(sl)]


# ---------------------------------------------------------------------------
# scaling factors


@dataclass(frozen=True)
class ScalingFactors:
    """Scale xi, offset beta and chirp constant eta of one scaling pass.

    For the range pass xi and beta are per-pulse arrays (beta in Hz) and
    eta = -pi K_r; for the azimuth pass they are per-row arrays (beta in
    rad) and eta = +pi K_a.
    """

    xi: np.ndarray
    beta: np.ndarray
    eta: float

    def __post_init__(self):
        xi = np.atleast_1d(np.asarray(self.xi, dtype=float))
        beta = np.broadcast_to(np.asarray(self.beta, dtype=float), xi.shape).copy()
        if np.any(xi == 0):
            raise ParameterError("scale factor xi must be nonzero")
        if np.any(np.abs(xi - 1.0) >= 0.5):
            raise GeometryError(
                "scale factor further than 0.5 from unity; geometry is outside "
                "the supported regime")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "beta", beta)


def range_factors(geom: ApertureGeometry, params: RadarParams) -> ScalingFactors:
    """Per-pulse fast-frequency scale/offset relative to the center line of sight.

    With delta = theta(t) - theta_k, the deramped sample at RF offset f
    must move to f' with (f_c + f')cos(delta) = f_c + f, giving

        xi_r   = 1 / cos(delta)
        beta_r = f_c (1 - cos(delta)) / cos(delta)
    """
    delta = geom.relative_azimuth
    cd = np.cos(delta)
    if np.any(np.abs(delta) >= np.pi / 2):
        raise GeometryError("|theta - theta_k| >= pi/2 inside the aperture")
    xi = 1.0 / cd
    beta = params.f_c * (1.0 - cd) / cd
    return ScalingFactors(xi=xi, beta=beta, eta=-np.pi * params.chirp_rate)


def doppler_rate(geom: ApertureGeometry, params: RadarParams) -> float:
    """Azimuth rechirp rate K_a = 2 v^2 sin^2(phi) / (lambda R_a) at center."""
    i = len(geom.t) // 2
    v = float(np.linalg.norm(geom.positions[i + 1] - geom.positions[i - 1])
              / (geom.t[i + 1] - geom.t[i - 1]))
    phi = geom.center_elevation
    k_a = 2.0 * v ** 2 * np.sin(phi) ** 2 / (params.wavelength * geom.center_range)
    if k_a == 0.0:
        raise GeometryError("degenerate Doppler rate (phi = 0 geometry)")
    return k_a


def azimuth_factors(f_tau: np.ndarray, params: RadarParams, k_a: float) -> ScalingFactors:
    """Per-row slow-time scale for the keystone-to-rectangle step.

    Relative to the center line of sight the target azimuth wavenumber is
    proportional to f_c while each row carries f_c + f_tau, so

        xi_a = f_c / (f_c + f_tau),  beta_a = 0.
    """
    f_tau = np.asarray(f_tau, dtype=float)
    if np.any(params.f_c + f_tau <= 0):
        raise ParameterError("row frequency reaches -f_c; grid far too wide")
    xi = params.f_c / (params.f_c + f_tau)
    return ScalingFactors(xi=xi, beta=np.zeros_like(xi), eta=np.pi * k_a)


# ---------------------------------------------------------------------------
# the two scaling chains
#
# Range chain, applied along axis 0 (fast time tau, relative to the
# scene-center return), factors per column t.  Input is the raw dechirped
# signal including its residual video phase; output is the RVP-free
# deramped signal evaluated at xi*tau + beta/K_r:
#
#   phi_s = exp(+j pi K_r (1 - xi) tau^2)
#   H_2   = exp(-j pi f^2 / (xi K_r)) exp(+j 2 pi beta f / (xi K_r))
#   phi_i = exp(+j pi K_r xi (xi - 1) tau^2) exp(+j 2 pi beta (xi - 1) tau)
#
# chained as  phi_s -> FT -> H_2 -> IFT -> phi_i.  At xi = 1, beta = 0 the
# chain degenerates to FT -> exp(-j pi f^2 / K_r) -> IFT, which is exactly
# the RVP compensation filter.


def _range_multipliers(tau, f, factors: ScalingFactors, kr: float):
    xi = factors.xi[None, :]
    beta = factors.beta[None, :]
    phi_s = np.exp(1j * np.pi * kr * (1.0 - xi) * tau[:, None] ** 2)
    h2 = np.exp(-1j * np.pi * f[:, None] ** 2 / (xi * kr)
                + 2j * np.pi * beta * f[:, None] / (xi * kr))
    phi_i = np.exp(1j * np.pi * kr * xi * (xi - 1.0) * tau[:, None] ** 2
                   + 2j * np.pi * beta * (xi - 1.0) * tau[:, None])
    return phi_s, h2, phi_i


def range_scale(data: np.ndarray, tau_step: float, factors: ScalingFactors,
                params: RadarParams, pad_to: int | None = None) -> np.ndarray:
    """Forward range chirp scaling of a (fast, slow) array.

    Returns the scaled array on the (possibly padded) centered tau grid.
    The caller keeps track of the relabeling f_tau = K_r * tau.
    """
    kr = params.chirp_rate
    n = data.shape[0]
    n_pad = pad_to or pad_length(n)
    x = pad_centered(data, n_pad, axis=0)
    tau = grid(n_pad, tau_step)
    f = grid(n_pad, dual_step(n_pad, tau_step))
    phi_s, h2, phi_i = _range_multipliers(tau, f, factors, kr)
    x = ft(x * phi_s, axis=0)
    x = ift(x * h2, axis=0)
    return x * phi_i


def range_scale_inverse(data: np.ndarray, tau_step: float, factors: ScalingFactors,
                        params: RadarParams) -> np.ndarray:
    """Exact stage-reversed conjugate of range_scale on the same grid."""
    kr = params.chirp_rate
    n = data.shape[0]
    tau = grid(n, tau_step)
    f = grid(n, dual_step(n, tau_step))
    phi_s, h2, phi_i = _range_multipliers(tau, f, factors, kr)
    x = ft(data * phi_i.conj(), axis=0)
    x = ift(x * h2.conj(), axis=0)
    return x * phi_s.conj()


# Azimuth chain, applied along axis 1 (slow time t), factors per row.
# Computes the azimuth Fourier transform of the time-scaled row
# u(xi t + beta_t):
#
#   h_1   = exp(+j pi K_a t^2)                       (rechirp)
#   phi_s = exp(+j pi (xi - 1) / (xi K_a) f^2)
#   h_2   = exp(-j pi xi K_a t^2)
#   phi_i = exp(+j pi (1 - xi) / (xi^2 K_a) f^2) exp(+j 2 pi (beta_t/xi) f)
#
# chained as  h_1 -> FT -> phi_s -> IFT -> h_2 -> FT -> phi_i; the closing
# transform doubles as the azimuth compression of the 2-D image transform.


def _azimuth_multipliers(t, f, factors: ScalingFactors, k_a: float):
    xi = factors.xi[:, None]
    beta = factors.beta[:, None]
    h1 = np.exp(1j * np.pi * k_a * t[None, :] ** 2)
    phi_s = np.exp(1j * np.pi * (xi - 1.0) / (xi * k_a) * f[None, :] ** 2)
    h2 = np.exp(-1j * np.pi * xi * k_a * t[None, :] ** 2)
    phi_i = np.exp(1j * np.pi * (1.0 - xi) / (xi ** 2 * k_a) * f[None, :] ** 2
                   + 2j * np.pi * (beta / xi) * f[None, :])
    return h1, phi_s, h2, phi_i


def azimuth_scale(data: np.ndarray, t_step: float, factors: ScalingFactors,
                  k_a: float, pad_to: int | None = None) -> np.ndarray:
    """Forward azimuth chirp scaling; output axis 1 is azimuth frequency."""
    n = data.shape[1]
    n_pad = pad_to or pad_length(n)
    x = pad_centered(data, n_pad, axis=1)
    t = grid(n_pad, t_step)
    f = grid(n_pad, dual_step(n_pad, t_step))
    h1, phi_s, h2, phi_i = _azimuth_multipliers(t, f, factors, k_a)
    x = ft(x * h1, axis=1)
    x = ift(x * phi_s, axis=1)
    x = ft(x * h2, axis=1)
    return x * phi_i


def azimuth_scale_inverse(data: np.ndarray, t_step: float, factors: ScalingFactors,
                          k_a: float) -> np.ndarray:
    """Exact stage-reversed conjugate of azimuth_scale on the same grid."""
    n = data.shape[1]
    t = grid(n, t_step)
    f = grid(n, dual_step(n, t_step))
    h1, phi_s, h2, phi_i = _azimuth_multipliers(t, f, factors, k_a)
    x = ift(data * phi_i.conj(), axis=1)
    x = ft(x * h2.conj(), axis=1)
    x = ift(x * phi_s.conj(), axis=1)
    return x * h1.conj()


def fresnel_margin(factors: ScalingFactors, k_a: float, halfwidth: float) -> float:
    """Worst-case conjugate-domain spread of the azimuth scaling sandwich.

    The phi_s multiplier convolves the slow-time signal with a chirp whose
    support is |(xi-1)/(xi K_a)| times the occupied Doppler band, so the
    padded window must exceed the data extent by this margin on each side.
    ``halfwidth`` is the occupied Doppler half-bandwidth in Hz.
    """
    p = np.max(np.abs((factors.xi - 1.0) / (factors.xi * k_a)))
    return 2.0 * p * halfwidth

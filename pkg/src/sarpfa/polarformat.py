"""Polar-format image formation: chirp-scaling pipeline and the
interpolation baseline.

Both formers consume the same dechirped echo.  ``pcs_pfa`` resamples with
the chirp-scaling engine relative to the aperture-center line of sight and
then rotates the focused image into the ground frame with exact FFT
shears, so the output is georeferenced identically for every frame
azimuth.  ``pfa_lospi`` is the classical two-pass windowed-sinc
interpolation onto the line-of-sight rectangular grid; its image rotates
with the frame and serves as the independent resampling oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import chirpscale as cs
from .echo import EchoMatrix, rvp_compensate
from .errors import DomainError, ParameterError
from .geometry import RadarParams
from .imageops import interp_columns, rotate_image

DEFAULT_KERNEL_TAPS = 16


@dataclass
class ComplexImage:
    """Focused complex pixel grid with ground georeferencing.

    ``pixels`` is indexed [ix, iy]; the physical position of pixel (i, j)
    is (x0 + i*dx, y0 + j*dy).  ``range_projection`` stores cos(phi) of the
    collection geometry so quality analysis can report slant-equivalent
    range resolution.
    """

    pixels: np.ndarray
    x0: float
    y0: float
    dx: float
    dy: float
    frame: int = 0
    coordinate_system: str = "GOCS"
    range_projection: float = 1.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.dx <= 0 or self.dy <= 0:
            raise ParameterError("pixel spacing must be positive")
        if self.coordinate_system not in ("GOCS", "LOS-slant"):
            raise ParameterError(f"unknown coordinate system {self.coordinate_system!r}")
        self.pixels = np.asarray(self.pixels)

    @property
    def x_axis(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.pixels.shape[0])

    @property
    def y_axis(self) -> np.ndarray:
        return self.y0 + self.dy * np.arange(self.pixels.shape[1])

    def index_of(self, xy) -> tuple[int, int]:
        ix = int(round((xy[0] - self.x0) / self.dx))
        iy = int(round((xy[1] - self.y0) / self.dy))
        return ix, iy

    def magnitude(self) -> np.ndarray:
        return np.abs(self.pixels)


def _ensure_raw_dechirp(echo: EchoMatrix, params: RadarParams) -> np.ndarray:
    """Return dechirped data with its residual video phase present.

    The range scaling chain embeds the RVP filter, so if a caller already
    compensated it the quadratic phase is put back spectrally first.
    """
    echo.require("dechirped")
    if not echo.rvp_removed:
        return echo.data
    n = echo.data.shape[0]
    f = np.fft.fftfreq(n, d=echo.fast_step)
    spec = np.fft.fft(echo.data, axis=0)
    spec *= np.exp(+1j * np.pi * f ** 2 / params.chirp_rate)[:, None]
    return np.fft.ifft(spec, axis=0)


def _axis_scales(echo: EchoMatrix, params: RadarParams):
    """Ground-meter-per-Hz factors of the focused transform axes."""
    geom = echo.geometry
    cphi = np.cos(geom.center_elevation)
    omega = geom.azimuth_rate
    range_scale = params.c / (2.0 * cphi * params.chirp_rate)   # u per fast-freq Hz
    azim_scale = -params.c / (2.0 * cphi * params.f_c * omega)  # v per Doppler Hz
    return range_scale, azim_scale


def focus_to_los(echo: EchoMatrix, params: RadarParams,
                 half_extent: float, min_spacing: float | None = None):
    """Run the double chirp-scaling chain and return the line-of-sight image.

    ``half_extent`` (m) is the ground half-size the caller needs; it sets
    the Doppler padding hint.  Returns (pixels, du, dv) with centered axes
    (u toward the radar ground track, v across).
    """
    geom = echo.geometry
    data = _ensure_raw_dechirp(echo, params)

    rfac = cs.range_factors(geom, params)
    n_fast = data.shape[0]
    fast_pad = cs.pad_length(n_fast)
    if min_spacing is not None:
        # spacing = range_scale / (N * dtau * K_r); grow N until fine enough
        rs, _ = _axis_scales(echo, params)
        need = int(np.ceil(abs(rs) / (min_spacing * echo.fast_step)))
        fast_pad = cs.pad_length(max(n_fast, 1), min_extra=max(0, need - n_fast))
    scaled = cs.range_scale(data, echo.fast_step, rfac, params, pad_to=fast_pad)

    k_a = cs.doppler_rate(geom, params)
    tau = cs.grid(fast_pad, echo.fast_step)
    f_tau = params.chirp_rate * tau
    afac = cs.azimuth_factors(f_tau, params, k_a)

    cphi = np.cos(geom.center_elevation)
    omega = abs(geom.azimuth_rate)
    nu_max = (2.0 * cphi / params.c) * (params.f_c + params.bandwidth / 2.0) \
        * omega * half_extent * 1.5
    margin = cs.fresnel_margin(afac, k_a, nu_max)
    extra = int(np.ceil(2.0 * margin / echo.slow_step))
    slow_pad = cs.pad_length(data.shape[1], min_extra=extra)
    if min_spacing is not None:
        _, az = _axis_scales(echo, params)
        need = int(np.ceil(abs(az) / (min_spacing * echo.slow_step)))
        slow_pad = max(slow_pad, cs.pad_length(max(data.shape[1], 1),
                                               min_extra=max(0, need - data.shape[1])))
    compressed = cs.azimuth_scale(scaled, echo.slow_step, afac, k_a, pad_to=slow_pad)

    image = cs.ft(compressed, axis=0)

    rs, az = _axis_scales(echo, params)
    du = abs(rs) * cs.dual_step(fast_pad, echo.fast_step)
    dv = abs(az) * cs.dual_step(slow_pad, echo.slow_step)
    if rs < 0:
        image = np.flip(image, axis=0)
        image = np.roll(image, 1 - (image.shape[0] % 2), axis=0)
    if az < 0:
        image = np.flip(image, axis=1)
        image = np.roll(image, 1 - (image.shape[1] % 2), axis=1)
    return image, du, dv


def _crop_to_window(pixels, d, half_extent, axis):
    n_want = int(np.ceil(2.0 * half_extent / d))
    n_want = min(n_want, pixels.shape[axis])
    return cs.crop_centered(pixels, n_want, axis)


def _match_spacings(image, du, dv):
    target = min(du, dv)
    if du > target * (1 + 1e-12):
        n_new = int(round(image.shape[0] * du / target))
        du = du * image.shape[0] / n_new
        image = cs.ft(cs.pad_centered(cs.ift(image, axis=0), n_new, 0), axis=0)
    if dv > target * (1 + 1e-12):
        n_new = int(round(image.shape[1] * dv / target))
        dv = dv * image.shape[1] / n_new
        image = cs.ft(cs.pad_centered(cs.ift(image, axis=1), n_new, 1), axis=1)
    return image, 0.5 * (du + dv), 0.5 * (du + dv)


def pcs_pfa(echo: EchoMatrix, params: RadarParams, half_extent: float = None,
            min_spacing: float | None = None, frame: int = 0) -> ComplexImage:
    """Interpolation-free polar-format image in the ground frame.

    The double chirp-scaling chain focuses in line-of-sight coordinates;
    the frame rotation to the ground grid is performed by exact FFT
    shears, so targets stay fixed across frame azimuths (up to the
    wavefront-curvature distortion this pipeline does not correct).
    """
    geom = echo.geometry
    if half_extent is None:
        half_extent = echo.meta.get("scene_half_extent", 64.0)
    image, du, dv = focus_to_los(echo, params, half_extent, min_spacing)

    theta_k = geom.theta_k
    if abs(theta_k) > 1e-12:
        # The shear rotation needs (near) square pixels: upsample the
        # coarser axis by spectral zero-padding (exact for band-limited
        # content).  The residual spacing mismatch is O(0.5 / n) relative.
        image, du, dv = _match_spacings(image, du, dv)
        crop_half = half_extent * 1.1
        image = _crop_to_window(image, du, crop_half, 0)
        image = _crop_to_window(image, dv, crop_half, 1)
        image = rotate_image(image, theta_k, du, dv)

    image = _crop_to_window(image, du, half_extent, 0)
    image = _crop_to_window(image, dv, half_extent, 1)
    nx, ny = image.shape
    return ComplexImage(
        pixels=image,
        x0=-(nx // 2) * du, y0=-(ny // 2) * dv, dx=du, dy=dv,
        frame=frame, coordinate_system="GOCS",
        range_projection=float(np.cos(geom.center_elevation)),
        meta={"algorithm": "pcs-pfa", "theta_k": theta_k},
    )


def pfa_lospi(echo: EchoMatrix, params: RadarParams, half_extent: float = 64.0,
              kernel_len: int = DEFAULT_KERNEL_TAPS, min_spacing: float | None = None,
              frame: int = 0) -> ComplexImage:
    """Interpolation-based polar format in the line-of-sight frame.

    Two separable windowed-sinc passes: per pulse the fast axis is
    resampled so the radial wavenumber matches the aperture-center ray,
    then per range-frequency row the pulses are resampled onto a uniform
    tangent grid.  The focused image rotates with the frame azimuth.
    """
    echo.require("dechirped")
    if kernel_len > echo.data.shape[0] or kernel_len > echo.data.shape[1]:
        raise ParameterError("interpolation kernel longer than the data support")
    comp = rvp_compensate(echo, params)
    geom = comp.geometry
    delta = geom.relative_azimuth
    cd = np.cos(delta)

    n_fast = comp.data.shape[0]
    fast_pad = cs.pad_length(n_fast)
    if min_spacing is not None:
        rs, _ = _axis_scales(comp, params)
        need = int(np.ceil(abs(rs) / (min_spacing * comp.fast_step)))
        fast_pad = cs.pad_length(n_fast, min_extra=max(0, need - n_fast))
    data = cs.pad_centered(comp.data, fast_pad, axis=0)
    tau = cs.grid(fast_pad, comp.fast_step)

    # Range pass: sample m of the output needs input RF offset
    #   f = (f_c + K_r tau_m) / cos(delta) - f_c
    kr = params.chirp_rate
    centers = fast_pad // 2
    f_out = kr * tau
    pos = (((params.f_c + f_out)[:, None] / cd[None, :]) - params.f_c) / kr
    pos = pos / comp.fast_step + centers
    rng_resampled = interp_columns(data, pos, kernel_len)

    # Azimuth pass: output column k needs tan(delta) = f_c * s_k / (f_c + f_out)
    n_slow = comp.data.shape[1]
    slow_pad = cs.pad_length(n_slow)
    if min_spacing is not None:
        _, az = _axis_scales(comp, params)
        need = int(np.ceil(abs(az) / (min_spacing * comp.slow_step)))
        slow_pad = max(slow_pad, cs.pad_length(n_slow, min_extra=max(0, need - n_slow)))
    rng_resampled = cs.pad_centered(rng_resampled, slow_pad, axis=1)
    tan_d = np.tan(delta)
    pulse_index = np.arange(len(delta), dtype=float)
    t_grid = cs.grid(slow_pad, comp.slow_step)
    omega = geom.azimuth_rate
    s_k = np.tan(omega * t_grid)                      # uniform output tangent grid
    left_pad = slow_pad // 2 - n_slow // 2
    need_tan = (params.f_c * s_k[None, :]) / (params.f_c + f_out[:, None])
    # invert tan(delta(t)) on the actual pulse grid (monotone in t)
    xp, fp = (tan_d, pulse_index) if tan_d[-1] > tan_d[0] else (tan_d[::-1], pulse_index[::-1])
    pos_az = np.interp(need_tan, xp, fp,
                       left=-2.0 * kernel_len, right=n_slow + 2.0 * kernel_len)
    pos_az = pos_az + left_pad
    img = interp_columns(rng_resampled.T, pos_az.T, kernel_len).T

    image = cs.ft(cs.ft(img, axis=0), axis=1)

    rs, az = _axis_scales(comp, params)
    du = abs(rs) * cs.dual_step(fast_pad, comp.fast_step)
    dv = abs(az) * cs.dual_step(slow_pad, comp.slow_step)
    if rs < 0:
        image = np.flip(image, axis=0)
        image = np.roll(image, 1 - (image.shape[0] % 2), axis=0)
    if az < 0:
        image = np.flip(image, axis=1)
        image = np.roll(image, 1 - (image.shape[1] % 2), axis=1)

    image = _crop_to_window(image, du, half_extent, 0)
    image = _crop_to_window(image, dv, half_extent, 1)
    nx, ny = image.shape
    return ComplexImage(
        pixels=image,
        x0=-(nx // 2) * du, y0=-(ny // 2) * dv, dx=du, dy=dv,
        frame=frame, coordinate_system="LOS-slant",
        range_projection=float(np.cos(geom.center_elevation)),
        meta={"algorithm": "pfa-lospi", "theta_k": geom.theta_k,
              "kernel_len": kernel_len},
    )

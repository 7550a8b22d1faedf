"""Wavefront-curvature analysis: distortion mapping, negligible regions,
and the sub-block resampling skip rule.

The planar-wavefront approximation of polar-format processing displaces a
target at (x, y) to (x*, y*); matching the constant and linear slow-time
terms of the true and planar differential ranges gives the closed-form
mapping below.  The distortion-negligible region (DiR) is where the
displacement stays under the matching resolution, the defocus-negligible
region (DeR) where the quadratic phase error stays ignorable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .geometry import ApertureGeometry, RadarParams


@dataclass(frozen=True)
class DistortionField:
    """Closed-form distortion data of one frame."""

    center_position: tuple     # (X_c, Y_c, Z_c)
    theta_k: float
    gamma: float = 0.0         # DiR extent scalar (diagonal convention)
    r_max: float = 0.0         # DeR radius
    gamma_bounded: bool = False  # True when the root search hit the scene edge


def _frame_constants(geom: ApertureGeometry):
    xc, yc, zc = geom.center_position
    r_a = float(np.hypot(np.hypot(xc, yc), zc))
    cphi = float(np.hypot(xc, yc) / r_a)
    return xc, yc, r_a, cphi


def distortion_map(target_xy, geom: ApertureGeometry):
    """Planar-wavefront image position (x*, y*) of ground target(s).

    Solves the constant/linear matching system

        x* X_c + y* Y_c = R_a^2 - R_a R_tk
        x* Y_c - y* X_c = R_a (x Y_c - y X_c) / R_tk

    in closed form.  Accepts scalars or arrays; broadcasts elementwise.
    """
    x = np.asarray(target_xy[0], dtype=float)
    y = np.asarray(target_xy[1], dtype=float)
    xc, yc, r_a, cphi = _frame_constants(geom)
    th_k = geom.theta_k
    zc = geom.center_position[2]
    r_tk = np.sqrt((xc - x) ** 2 + (yc - y) ** 2 + zc ** 2)
    if np.any(r_tk <= 0):
        raise ParameterError("target coincides with the platform")
    cth, sth = np.cos(th_k), np.sin(th_k)
    xs = (r_a - r_tk) * cth / cphi + (x * yc - y * xc) * sth / (r_tk * cphi)
    ys = (r_a - r_tk) * sth / cphi + (y * xc - x * yc) * cth / (r_tk * cphi)
    return xs, ys


def offset_field(target_xy, geom: ApertureGeometry):
    """Displacement magnitude r_d = |(x, y) - (x*, y*)|."""
    xs, ys = distortion_map(target_xy, geom)
    return np.hypot(np.asarray(target_xy[0]) - xs, np.asarray(target_xy[1]) - ys)


def dir_gamma(geom: ApertureGeometry, rho_x: float, scene_half: float = 1e4):
    """DiR extent gamma and the region predicate for one frame.

    The displacement is bisected to rho_x along the frame symmetry axis
    (the ray at theta_k through the origin, toward the radar); gamma is
    sqrt(2) times that root, so a square sub-block of side W_r <= gamma/sqrt(2)
    keeps every interior point inside the axis extent.  If no root exists
    within ``scene_half`` the bound is returned flagged.
    """
    if rho_x <= 0:
        raise ParameterError("rho_x must be positive")
    direction = np.array([np.cos(geom.theta_k), np.sin(geom.theta_k)])

    def rd(s):
        return float(offset_field((direction[0] * s, direction[1] * s), geom))

    lo, hi = 0.0, scene_half
    if rd(hi) < rho_x:
        return float(np.sqrt(2.0) * hi), _predicate(geom, rho_x), True
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if rd(mid) > rho_x:
            hi = mid
        else:
            lo = mid
        if hi - lo < rho_x / 100.0:
            break
    root = 0.5 * (lo + hi)
    return float(np.sqrt(2.0) * root), _predicate(geom, rho_x), False


def _predicate(geom: ApertureGeometry, rho_x: float):
    def inside(x, y):
        return offset_field((x, y), geom) <= rho_x
    return inside


def der_radius(params: RadarParams, rho_a: float, r_a: float) -> float:
    """Defocus-negligible scene radius r_max = rho_a sqrt(2 R_a / lambda)."""
    if rho_a <= 0 or r_a <= 0:
        raise ParameterError("rho_a and r_a must be positive")
    return rho_a * np.sqrt(2.0 * r_a / params.wavelength)


def resample_skip_check(rho_r: float, rho_a: float, phi: float, wavelength: float,
                        w_r: float) -> bool:
    """May a sub-block skip its wavenumber resampling?

    The no-resampling scene bounds are |X_e| = 2 rho_r rho_a cos(phi) / lambda
    and |Y_e| = 2 rho_a^2 cos(phi) / lambda; skipping is allowed when the
    sub-block side fits under both.
    """
    if rho_r <= 0 or rho_a <= 0 or wavelength <= 0 or w_r <= 0:
        raise ParameterError("inputs must be positive")
    x_eps = 2.0 * rho_r * rho_a * np.cos(phi) / wavelength
    y_eps = 2.0 * rho_a ** 2 * np.cos(phi) / wavelength
    return bool(w_r <= min(x_eps, y_eps))


def field_for(geom: ApertureGeometry, params: RadarParams, rho_x: float,
              rho_a: float) -> DistortionField:
    """Bundle the per-frame curvature scalars."""
    gamma, _, bounded = dir_gamma(geom, rho_x)
    return DistortionField(
        center_position=tuple(geom.center_position), theta_k=geom.theta_k,
        gamma=gamma, r_max=der_radius(params, rho_a, geom.center_range),
        gamma_bounded=bounded)


def offset_raster(geom: ApertureGeometry, half_extent: float, n: int = 256):
    """Rasterized displacement field for region maps.

    Returns (x_axis, y_axis, r_d) with r_d indexed [ix, iy]; contouring
    r_d at rho_x draws the DiR boundary.
    """
    ax = np.linspace(-half_extent, half_extent, n)
    xg, yg = np.meshgrid(ax, ax, indexing="ij")
    return ax, ax, offset_field((xg, yg), geom)

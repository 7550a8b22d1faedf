"""Radar constants, circular spotlight trajectories and wavenumber coordinates.

Everything downstream (echo synthesis, polar-format focusing, curvature
analysis) works from the quantities defined here: per-pulse antenna
positions, slant ranges, azimuth/elevation angles and the dechirped
spatial wavenumber.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError, ParameterError

C_DEFAULT = 299_792_458.0  # m/s, overridable through RadarParams


@dataclass(frozen=True)
class RadarParams:
    """Waveform and sampling constants of the dechirp-on-receive radar.

    Parameters
    ----------
    f_c : float
        Carrier frequency in Hz.
    chirp_rate : float
        LFM chirp rate K_r in Hz/s (sign allowed).
    pulse_width : float
        Transmitted pulse width T_r in seconds.
    sampling_frequency : float
        Complex baseband sampling rate of the dechirped signal in Hz.
    prf : float
        Pulse repetition frequency in Hz.
    c : float
        Propagation speed, defaults to the vacuum speed of light.
    """

    f_c: float
    chirp_rate: float
    pulse_width: float
    sampling_frequency: float
    prf: float
    c: float = C_DEFAULT

    def __post_init__(self):
        if self.sampling_frequency <= 0 or self.prf <= 0:
            raise ParameterError("sampling_frequency and prf must be positive")
        if self.pulse_width <= 0:
            raise ParameterError("pulse_width must be positive")
        if self.f_c <= self.bandwidth:
            raise ParameterError(
                f"carrier {self.f_c:.3g} Hz must exceed bandwidth {self.bandwidth:.3g} Hz"
            )

    @property
    def bandwidth(self) -> float:
        """Swept bandwidth B = |K_r| * T_r."""
        return abs(self.chirp_rate) * self.pulse_width

    @property
    def wavelength(self) -> float:
        return self.c / self.f_c

    @classmethod
    def from_bandwidth(cls, f_c, bandwidth, pulse_width, sampling_frequency, prf,
                       c=C_DEFAULT) -> "RadarParams":
        """Construct from B instead of K_r, with B = K_r * T_r exactly."""
        return cls(f_c=f_c, chirp_rate=bandwidth / pulse_width,
                   pulse_width=pulse_width, sampling_frequency=sampling_frequency,
                   prf=prf, c=c)


@dataclass(frozen=True)
class Trajectory:
    """Per-pulse antenna phase-center samples for one frame.

    ``positions`` are the true (possibly perturbed) positions used when
    synthesizing echoes; ``nominal_positions`` are what the processor
    believes.  They coincide unless a motion error is injected with
    ``known=False``.

    Slow time ``t`` is zero at the aperture center; the pulse count is
    kept odd so t = 0 is an actual sample.
    """

    positions: np.ndarray          # (n, 3) true positions
    t: np.ndarray                  # (n,) slow time, centered
    flight_radius: float           # R_s, ground-projected circle radius
    velocity: float
    theta_k: float                 # frame center azimuth, rad
    theta_s: float = 0.0           # per-frame rotation step, rad
    overlap_ratio: float = 0.0
    nominal_positions: np.ndarray | None = None

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape[0] < 3:
            raise ParameterError("positions must be (n >= 3, 3)")
        if pos.shape[0] % 2 != 1:
            raise ParameterError("pulse count must be odd (aperture-center sample)")
        if not 0.0 <= self.overlap_ratio < 1.0:
            raise ParameterError("overlap_ratio must be in [0, 1)")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "t", np.asarray(self.t, dtype=float))
        if self.nominal_positions is None:
            object.__setattr__(self, "nominal_positions", pos)
        else:
            nom = np.asarray(self.nominal_positions, dtype=float)
            if nom.shape != pos.shape:
                raise ParameterError("nominal_positions shape mismatch")
            object.__setattr__(self, "nominal_positions", nom)

    @property
    def n_pulses(self) -> int:
        return self.positions.shape[0]

    @property
    def center_index(self) -> int:
        return self.n_pulses // 2

    def processor_view(self, known: bool = True) -> np.ndarray:
        """Positions available to the image formation chain."""
        return self.positions if known else self.nominal_positions

    def resample_positions(self, t_new: np.ndarray, known: bool = True) -> np.ndarray:
        """Linearly interpolate the per-pulse positions onto new slow times."""
        pos = self.processor_view(known)
        out = np.empty((len(t_new), 3))
        for k in range(3):
            out[:, k] = np.interp(t_new, self.t, pos[:, k])
        return out


@dataclass(frozen=True)
class ApertureGeometry:
    """Derived per-pulse look geometry for one frame.

    ``positions`` here are processor-side (nominal unless the motion is
    known), so the wavenumber mapping is built from what a real system
    would know.
    """

    positions: np.ndarray
    t: np.ndarray
    theta_k: float
    c: float = C_DEFAULT
    true_positions: np.ndarray | None = None

    @property
    def scene_center_range(self) -> np.ndarray:
        """R_a(t), slant range from each pulse to the scene center."""
        return np.linalg.norm(self.positions, axis=1)

    @property
    def azimuth_angle(self) -> np.ndarray:
        """theta(t), quadrant-aware."""
        return np.arctan2(self.positions[:, 1], self.positions[:, 0])

    @property
    def elevation_angle(self) -> np.ndarray:
        """phi(t) with sin(phi) = Z_a / R_a."""
        return np.arcsin(self.positions[:, 2] / self.scene_center_range)

    @property
    def center_position(self) -> np.ndarray:
        """(X_c, Y_c, Z_c), the aperture-center platform position."""
        return self.positions[len(self.t) // 2]

    @property
    def center_range(self) -> float:
        return float(np.linalg.norm(self.center_position))

    @property
    def center_elevation(self) -> float:
        p = self.center_position
        return float(np.arcsin(p[2] / np.linalg.norm(p)))

    @property
    def relative_azimuth(self) -> np.ndarray:
        """theta(t) - theta_k wrapped to (-pi, pi]."""
        d = self.azimuth_angle - self.theta_k
        return np.arctan2(np.sin(d), np.cos(d))

    @property
    def azimuth_rate(self) -> float:
        """d theta / dt at the aperture center (central difference)."""
        th = np.unwrap(self.azimuth_angle)
        i = len(self.t) // 2
        return float((th[i + 1] - th[i - 1]) / (self.t[i + 1] - self.t[i - 1]))

    def true_ranges_to(self, target_xy) -> np.ndarray:
        """Per-pulse slant range to a ground point, using true positions."""
        pos = self.true_positions if self.true_positions is not None else self.positions
        x, y = target_xy
        return np.sqrt((pos[:, 0] - x) ** 2 + (pos[:, 1] - y) ** 2 + pos[:, 2] ** 2)


def geometry_for(traj: Trajectory, params: RadarParams, known: bool = True) -> ApertureGeometry:
    """Build the processor-side geometry for a trajectory."""
    return ApertureGeometry(
        positions=traj.processor_view(known),
        t=traj.t,
        theta_k=traj.theta_k,
        c=params.c,
        true_positions=traj.positions,
    )


def make_circular_trajectory(params: RadarParams, slant_range: float, grazing: float,
                             velocity: float, theta_k: float,
                             aperture_angle: float, theta_s: float = 0.0,
                             overlap_ratio: float = 0.0) -> Trajectory:
    """Sample a circular-spotlight aperture centered on azimuth theta_k.

    The platform flies a horizontal circle of radius R_s = R_a*cos(grazing)
    at height Z_a = R_a*sin(grazing), sweeping ``aperture_angle`` radians at
    angular rate v / R_s.  The pulse count is forced odd.

    Aperture sizing from a desired azimuth resolution rho_a uses
    ``aperture_for_resolution`` (documented there).
    """
    if slant_range <= 0 or velocity <= 0:
        raise ParameterError("slant_range and velocity must be positive")
    if aperture_angle <= 0:
        raise ParameterError("aperture_angle must be positive (degenerate aperture)")
    if not 0 < grazing < np.pi / 2:
        raise GeometryError("grazing angle must lie in (0, pi/2)")
    r_s = slant_range * np.cos(grazing)
    z_a = slant_range * np.sin(grazing)
    omega = velocity / r_s
    duration = aperture_angle / omega
    n = int(round(duration * params.prf))
    if n < 3:
        raise ParameterError("aperture shorter than 3 pulses at this PRF")
    if n % 2 == 0:
        n += 1
    t = (np.arange(n) - n // 2) / params.prf
    ang = theta_k + omega * t
    pos = np.column_stack([r_s * np.cos(ang), r_s * np.sin(ang), np.full(n, z_a)])
    return Trajectory(positions=pos, t=t, flight_radius=r_s, velocity=velocity,
                      theta_k=theta_k, theta_s=theta_s, overlap_ratio=overlap_ratio)


def aperture_for_resolution(params: RadarParams, rho_a: float, grazing: float) -> float:
    """Aperture angle giving ground azimuth resolution rho_a.

    The azimuth wavenumber extent of a spotlight aperture of angular width
    dtheta is (4 pi / lambda) cos(grazing) dtheta, so the nominal ground
    resolution is 2 pi over that and

        dtheta = lambda / (2 rho_a cos(grazing)).
    """
    if rho_a <= 0:
        raise ParameterError("rho_a must be positive")
    return params.wavelength / (2.0 * rho_a * np.cos(grazing))


def slant_range_to_point(traj: Trajectory, target_xy) -> np.ndarray:
    """Per-pulse slant range between the (true) platform and a ground point."""
    if traj.n_pulses == 0:
        raise ParameterError("empty trajectory")
    x, y = target_xy
    p = traj.positions
    return np.sqrt((p[:, 0] - x) ** 2 + (p[:, 1] - y) ** 2 + p[:, 2] ** 2)


def frame_rate(params: RadarParams, rho_a: float, velocity: float,
               overlap_ratio: float, slant_range: float) -> float:
    """Video frame rate F_r = 2 rho_a v f_c / ((1 - omega) R_a c).

    Evaluated exactly as defined; note that plugging in the often-quoted
    (R_a = 1000 m, v = 50 m/s, rho_a = 0.2 m) gives 13.8 Hz at 207 GHz,
    i.e. a 5 Hz rate already holds below 207 GHz.  See the config
    reference for discussion.
    """
    if not 0.0 <= overlap_ratio < 1.0:
        raise ParameterError("overlap_ratio must be in [0, 1)")
    if rho_a <= 0 or velocity <= 0 or slant_range <= 0:
        raise ParameterError("rho_a, velocity and slant_range must be positive")
    return 2.0 * rho_a * velocity * params.f_c / ((1.0 - overlap_ratio) * slant_range * params.c)


def spatial_wavenumber(params: RadarParams, f_tau) -> np.ndarray:
    """K_R = (4 pi / c) (f_c + f_tau) for baseband fast-time frequency f_tau."""
    return 4.0 * np.pi / params.c * (params.f_c + np.asarray(f_tau, dtype=float))


def wavenumber_coordinates(geom: ApertureGeometry, params: RadarParams, f_tau,
                           rotated: bool = False):
    """Polar wavenumber coordinates of every (f_tau, pulse) sample.

    Returns ``(K_X, K_Y, K_R)`` with K_X = K_R cos(phi) cos(theta) and
    K_Y = K_R cos(phi) sin(theta); shapes broadcast as
    (len(f_tau), n_pulses).  With ``rotated=True`` the ground-frame
    rectangular targets (K_Xr, K_Yr) are returned instead of (K_X, K_Y):

        K_Xr = (4 pi / c)(f_tau + f_c cos theta_k) cos phi
        K_Yr = (4 pi / c) f_c [(theta - theta_k) sec^2 theta_k + sin theta_k] cos phi
    """
    f_tau = np.atleast_1d(np.asarray(f_tau, dtype=float))[:, None]
    k_r = spatial_wavenumber(params, f_tau)
    cphi = np.cos(geom.elevation_angle)[None, :]
    theta = geom.azimuth_angle[None, :]
    if not rotated:
        k_x = k_r * cphi * np.cos(theta)
        k_y = k_r * cphi * np.sin(theta)
        return k_x, k_y, np.broadcast_to(k_r, k_x.shape)
    th_k = geom.theta_k
    sec2 = 1.0 / np.cos(th_k) ** 2
    four_pi_c = 4.0 * np.pi / params.c
    k_xr = four_pi_c * (f_tau + params.f_c * np.cos(th_k)) * cphi
    k_yr = four_pi_c * params.f_c * ((theta - th_k) * sec2 + np.sin(th_k)) * cphi
    shape = np.broadcast_shapes(k_xr.shape, k_yr.shape)
    return (np.broadcast_to(k_xr, shape).copy(),
            np.broadcast_to(k_yr, shape).copy(),
            np.broadcast_to(k_r, shape).copy())


def gocs_rotation(theta_k: float) -> np.ndarray:
    """Rotation matrix of the line-of-sight to ground frame conversion."""
    c, s = np.cos(theta_k), np.sin(theta_k)
    return np.array([[c, s], [-s, c]])

"""
Geometric frequency of the voltage trajectory v(t) = (v_a, v_b, v_c) in
three-dimensional space:

    scalar part     rho       = (v . v') / |v|^2
    bivector part   omega_biv = |v ^ v'| / |v|^2
    torsion         tau       = |v . (v' x v'')| / |v ^ v'|^2

The bivector v ^ v' is represented by its dual, the cross product v x v'.
Quantities that are undefined at a sample (|v| at the magnitude floor, or
v and v' parallel) are NaN.
"""
import logging
import numpy as np
from typing import NamedTuple, Optional

from .series import SeriesError, ComplexSeries, interior_mask, \
    time_derivative
from .signal_model import ThreePhaseSignal
from .analytic import MAGNITUDE_FLOOR, hilbert, hilbert_guard


logger = logging.getLogger(__name__)


MIN_SAMPLES = 5

# max. interior |tau| * period * |v| of a trajectory that is considered planar
TORSION_THRESHOLD = 1e-4

# v and v' are treated as parallel if sin(angle(v, v')) <= SINE_FLOOR
SINE_FLOOR = 1e-9


class GeometryError(ValueError):
    """
    The trajectory does not permit the requested geometric construction
    """


class NonPlanarError(GeometryError):

    def __init__(self, metric, threshold=TORSION_THRESHOLD):
        super().__init__(f'trajectory is not planar (torsion metric '
                         f'{metric:.3g} exceeds {threshold:g})')
        self.metric = metric
        self.threshold = threshold


class Derivatives(NamedTuple):
    velocity: np.ndarray
    acceleration: np.ndarray
    edge_margin: int = 1


def second_derivative(values:np.ndarray, dt:float) -> np.ndarray:
    """
    3-point stencil in the interior, 4-point one sided 2nd order stencils at
    both ends. Differentiates along the first axis.
    """
    if len(values) < 4:
        raise SeriesError('at least 4 samples are required for a 2nd '
                          'derivative')
    result = np.empty_like(values)
    result[1:-1] = values[2:] - 2*values[1:-1] + values[:-2]
    result[0] = 2*values[0] - 5*values[1] + 4*values[2] - values[3]
    result[-1] = 2*values[-1] - 5*values[-2] + 4*values[-3] - values[-4]
    return result / dt**2


def derivatives(sig:ThreePhaseSignal) -> Derivatives:
    if len(sig) < MIN_SAMPLES:
        raise GeometryError(f'derivatives of a trajectory require at least '
                            f'{MIN_SAMPLES} samples (got {len(sig)})')
    return Derivatives(time_derivative(sig.samples, sig.dt),
                       second_derivative(sig.samples, sig.dt))


class GeometricFrequencySeries:
    """
    Per sample scalar part 'rho' (Np/s), bivector magnitude 'omega_biv'
    (rad/s), unit normal of the rotation plane 'plane_normal' (N, 3) and
    (optionally) 'torsion'.
    """

    def __init__(self, t0:float, dt:float, rho, omega_biv, plane_normal,
                 torsion=None, edge_margin:int=1):
        self.t0 = float(t0)
        self.dt = float(dt)
        self.rho = np.asarray(rho, dtype=float)
        self.omega_biv = np.asarray(omega_biv, dtype=float)
        self.plane_normal = np.asarray(plane_normal, dtype=float)
        self.torsion = None if torsion is None \
                       else np.asarray(torsion, dtype=float)
        self.edge_margin = int(edge_margin)

    def __len__(self):
        return len(self.rho)

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self))

    @property
    def interior(self) -> np.ndarray:
        return interior_mask(len(self), self.edge_margin)

    def __repr__(self):
        return f'GeometricFrequencySeries(t0={self.t0!r}, dt={self.dt!r}, ' \
               f'n={len(self)}, edge_margin={self.edge_margin})'


def _defined_magnitude(v:np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(v, axis=1)
    return norm > MAGNITUDE_FLOOR * norm.max()


def _defined_rotation(v, v_dot, wedge_norm) -> np.ndarray:
    scale = np.linalg.norm(v, axis=1) * np.linalg.norm(v_dot, axis=1)
    with np.errstate(divide='ignore', invalid='ignore'):
        return wedge_norm > SINE_FLOOR * scale


def geometric_frequency(v, v_dot, t0:float=0.0, dt:float=1.0,
                        edge_margin:int=1) -> GeometricFrequencySeries:
    v = np.asarray(v, dtype=float)
    v_dot = np.asarray(v_dot, dtype=float)
    if v.shape != v_dot.shape or v.ndim != 2 or v.shape[1] != 3:
        raise GeometryError('v and its derivative have to be of shape (N, 3)')
    norm2 = np.sum(v**2, axis=1)
    wedge = np.cross(v, v_dot)
    wedge_norm = np.linalg.norm(wedge, axis=1)
    magnitude_ok = _defined_magnitude(v)
    rotation_ok = magnitude_ok & _defined_rotation(v, v_dot, wedge_norm)
    with np.errstate(divide='ignore', invalid='ignore'):
        rho = np.where(magnitude_ok, np.sum(v * v_dot, axis=1) / norm2, np.nan)
        omega_biv = np.where(magnitude_ok, wedge_norm / norm2, np.nan)
        normal = np.where(rotation_ok[:, np.newaxis],
                          wedge / wedge_norm[:, np.newaxis], np.nan)
    return GeometricFrequencySeries(t0, dt, rho, omega_biv, normal,
                                    edge_margin=edge_margin)


def torsion(v, v_dot, v_ddot) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    v_dot = np.asarray(v_dot, dtype=float)
    wedge = np.cross(v, v_dot)
    wedge_norm = np.linalg.norm(wedge, axis=1)
    defined = _defined_magnitude(v) & _defined_rotation(v, v_dot, wedge_norm)
    triple = np.einsum('ij,ij->i', v, np.cross(v_dot, v_ddot))
    with np.errstate(divide='ignore', invalid='ignore'):
        return np.where(defined, np.abs(triple) / wedge_norm**2, np.nan)


def geometric_analysis(sig:ThreePhaseSignal) -> GeometricFrequencySeries:
    """derivatives, geometric frequency and torsion of a trajectory"""
    derivs = derivatives(sig)
    series = geometric_frequency(sig.samples, derivs.velocity, sig.t0,
                                 sig.dt, derivs.edge_margin)
    series.torsion = torsion(sig.samples, derivs.velocity,
                             derivs.acceleration)
    return series


def torsion_metric(series:GeometricFrequencySeries, samples,
                   period:Optional[float]=None) -> float:
    """
    Dimensionless planarity metric max|tau| * period * median|v| over the
    interior samples. 'period' defaults to 2 pi / median(omega_biv).
    Returns NaN if no interior sample has a defined torsion.
    """
    if series.torsion is None:
        raise GeometryError('series has no torsion (use geometric_analysis)')
    interior = series.interior
    tau = np.abs(series.torsion[interior])
    if np.isnan(tau).all():
        return float('nan')
    if period is None:
        omega = np.nanmedian(series.omega_biv[interior])
        if not omega > 0:
            raise GeometryError('rotation period is undefined (no rotation)')
        period = 2 * np.pi / omega
    scale = np.median(np.linalg.norm(np.asarray(samples)[interior], axis=1))
    return float(np.nanmax(tau) * period * scale)


class PlaneBasis(NamedTuple):
    """orthonormal axes (mu, xi) of the plane that holds a trajectory"""
    normal: np.ndarray
    mu_axis: np.ndarray
    xi_axis: np.ndarray
    residual: float
    torsion_metric: float = 0.0

    def coordinates(self, sig:ThreePhaseSignal) -> ComplexSeries:
        """v_mu + j v_xi"""
        return ComplexSeries(sig.t0, sig.dt,
                             sig.samples @ self.mu_axis
                             + 1j * (sig.samples @ self.xi_axis))

    def reversed(self) -> 'PlaneBasis':
        """same plane with the xi axis (and thus the normal) flipped"""
        return self._replace(normal=-self.normal, xi_axis=-self.xi_axis)


def find_plane(sig:ThreePhaseSignal, mu_reference=None,
               threshold:float=TORSION_THRESHOLD) -> PlaneBasis:
    """
    Determines the plane of a trajectory with zero torsion.

    The normal is the mean of the per-sample rotation normals (signs aligned
    to the first interior one), so the trajectory rotates from mu towards xi.
    mu is the projection of 'mu_reference' (default: the first interior
    sample vector) onto the plane.
    """
    series = geometric_analysis(sig)
    metric = torsion_metric(series, sig.samples)
    if metric > threshold:
        raise NonPlanarError(metric, threshold)
    interior = series.interior
    normals = series.plane_normal[interior]
    normals = normals[~np.isnan(normals).any(axis=1)]
    if len(normals) == 0:
        raise GeometryError('no sample defines a plane of rotation')
    signs = np.sign(normals @ normals[0])
    normal = np.mean(normals * signs[:, np.newaxis], axis=0)
    normal /= np.linalg.norm(normal)
    if mu_reference is None:
        samples = sig.samples[interior]
        mu_reference = samples[np.argmax(np.linalg.norm(samples, axis=1) > 0)]
    mu = np.asarray(mu_reference, dtype=float)
    mu = mu - (mu @ normal) * normal
    if np.linalg.norm(mu) <= SINE_FLOOR * np.linalg.norm(mu_reference):
        raise GeometryError('mu reference is perpendicular to the plane')
    mu /= np.linalg.norm(mu)
    xi = np.cross(normal, mu)
    residual = np.abs(sig.samples @ normal).max() \
               / np.linalg.norm(sig.samples, axis=1).max()
    logger.debug('plane normal %s (residual %g, torsion metric %g)',
                 normal, residual, metric)
    return PlaneBasis(normal, mu, xi, float(residual),
                      0.0 if np.isnan(metric) else metric)


class HilbertPairResidual(NamedTuple):
    residual: float
    reversed_residual: float

    @property
    def orientation_reversed(self) -> bool:
        """the residual would be smaller with the xi axis flipped"""
        return self.reversed_residual < self.residual


def hilbert_pair_check(basis:PlaneBasis, sig:ThreePhaseSignal) \
        -> HilbertPairResidual:
    """
    max interior |v_xi - H{v_mu}| / max|v| (and the same for -v_xi)
    """
    coords = basis.coordinates(sig)
    quadrature = hilbert(coords.real)
    interior = interior_mask(len(sig), hilbert_guard(len(sig)))
    scale = np.linalg.norm(sig.samples, axis=1).max()
    residual = np.abs(coords.imag - quadrature)[interior].max() / scale
    reversed_residual = \
        np.abs(-coords.imag - quadrature)[interior].max() / scale
    result = HilbertPairResidual(float(residual), float(reversed_residual))
    if result.orientation_reversed:
        logger.warning('xi axis seems to be reversed (residual %g, %g when '
                       'reversed)', residual, reversed_residual)
    return result

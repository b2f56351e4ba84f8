"""
Numerical checks of the relations between the analytic signal (Hahn), space
vector (Park / Lei) and geometric formulations of the complex frequency.

Relation ids:

    EQ7       Lei phase/frequency vs. the frame based rearrangement of the
              space vector IPP/IPF
    EQ12      Park vector vs. the rotated analytic signal of phase a
    EQ13_ICP  phi_m == phi_h - j delta_dq       (modulo 2 pi)
    EQ13_ICF  s_m   == s_h   - j omega_dq
    EQ15      rho_m == (v.v')/|v|^2, omega_m == |v^v'|/|v|^2 - omega_dq
              (only if the torsion is zero)
    EQ17      v_xi == H{v_mu} in the trajectory plane, and the ICF of the
              analytic v_mu coincides with the IPF of v_mu + j v_xi
"""
import json
import logging
import numpy as np
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Iterable, Tuple

from .series import ComplexSeries, interior_mask
from .signal_model import ThreePhaseSignal, DEFAULT_SHIFTS
from .analytic import analytic_signal, icp, icf, phase_derivative, \
    bedrosian_overlap
from .space_vector import RotatingFrame, ZERO_FRAME, clarke, park, ipp, ipf,\
    lei_icp, lei_from_planar, lei_frequency_from_planar, \
    zero_sequence_energy
from .geometric import GeometryError, NonPlanarError, TORSION_THRESHOLD, \
    geometric_analysis, torsion_metric, find_plane, hilbert_pair_check


logger = logging.getLogger(__name__)


RELATIONS = ('EQ7', 'EQ12', 'EQ13_ICP', 'EQ13_ICF', 'EQ15', 'EQ17')

RELATION_GROUPS = {'EQ13': ('EQ13_ICP', 'EQ13_ICF')}

# ICF tolerances are DEFAULT_TOL_ICF_FACTOR * omega_o
DEFAULT_TOL_ICF_FACTOR = 1e-3
DEFAULT_TOL_ICP = 1e-3
DEFAULT_TOL_LEI = 1e-12
DEFAULT_TOL_CLARKE_PARK = 1e-6
DEFAULT_TOL_COORDINATE = 1e-3

TOLERANCE_NAMES = ('icf', 'icp', 'lei', 'clarke_park', 'coordinate')

# phase a lies on the alpha axis
PHASE_A_AXIS = np.array([1.0, 0.0, 0.0])


class UnknownRelationError(ValueError):

    def __init__(self, relation):
        super().__init__(f'unknown relation {relation!r} (known: '
                         f'{", ".join(RELATIONS + tuple(RELATION_GROUPS))})')
        self.relation = relation


def _json_float(value):
    if value is None:
        return None
    value = float(value)
    return value if np.isfinite(value) else None


class EquivalenceReport:
    """
    Outcome of checking one relation on one signal.

    'difference' is the per sample left-minus-right (complex where the
    relation compares complex quantities), 'residual' the per sample value
    the tolerance applies to. A report with a 'reason' is gated: a
    precondition of the relation does not hold, so it is violated
    regardless of the residual.
    """

    def __init__(self, relation:str, t0:float, dt:float, difference,
                 residual, edge_margin:int, tolerance:float, units:str,
                 reason:Optional[str]=None, provenance:Optional[str]=None,
                 metrics:Optional[Dict[str, float]]=None):
        self.relation = relation
        self.t0 = float(t0)
        self.dt = float(dt)
        self.difference = np.asarray(difference)
        self.residual = np.asarray(residual, dtype=float)
        self.edge_margin = int(edge_margin)
        self.tolerance = float(tolerance)
        self.units = units
        self.provenance = provenance
        self.metrics = dict(metrics or {})
        interior = self.residual[self.interior]
        if reason is None and not interior.size:
            reason = 'no interior samples'
        if reason is None and np.isnan(interior).all():
            reason = 'residual undefined at all interior samples'
        self.reason = reason
        if not interior.size or np.isnan(interior).all():
            self.interior_max = float('inf')
            self.interior_rms = float('nan')
        else:
            self.interior_max = float(np.nanmax(interior))
            self.interior_rms = float(np.sqrt(np.nanmean(interior ** 2)))
        undefined = int(np.isnan(interior).sum())
        if undefined:
            self.metrics['undefined_samples'] = undefined

    @classmethod
    def gated(cls, relation:str, sig:ThreePhaseSignal, tolerance:float,
              units:str, reason:str, edge_margin:int=0, **kwargs):
        nan = np.full(len(sig), np.nan)
        return cls(relation, sig.t0, sig.dt, nan, nan, edge_margin,
                   tolerance, units, reason, **kwargs)

    def __len__(self):
        return len(self.residual)

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self))

    @property
    def interior(self) -> np.ndarray:
        return interior_mask(len(self.residual), self.edge_margin)

    @property
    def excluded_samples(self) -> int:
        return int(np.count_nonzero(~self.interior))

    @property
    def holds(self) -> bool:
        return self.reason is None and self.interior_max <= self.tolerance

    @property
    def verdict(self) -> str:
        return 'holds' if self.holds else 'violated'

    def to_dict(self, with_series:bool=True):
        desc = dict(relation=self.relation,
                    verdict=self.verdict,
                    reason=self.reason,
                    tolerance=_json_float(self.tolerance),
                    units=self.units,
                    interior_max=_json_float(self.interior_max),
                    interior_rms=_json_float(self.interior_rms),
                    edge_margin=self.edge_margin,
                    excluded_samples=self.excluded_samples,
                    provenance=self.provenance,
                    t0=self.t0, dt=self.dt, n=len(self),
                    metrics={name: _json_float(value)
                             for name, value in self.metrics.items()})
        if with_series:
            desc['residual'] = [_json_float(val) for val in self.residual]
        return desc

    def to_json(self, with_series:bool=True) -> str:
        return json.dumps(self.to_dict(with_series), indent=2,
                          sort_keys=True)

    def to_text(self) -> str:
        line = f'{self.relation:<9} {self.verdict:<8} ' \
               f'max={self.interior_max:.6g} tol={self.tolerance:.6g} ' \
               f'[{self.units}]'
        if self.reason:
            line += f' ({self.reason})'
        return line

    def __repr__(self):
        return f'<EquivalenceReport {self.relation} {self.verdict} ' \
               f'max={self.interior_max:.3g} tol={self.tolerance:.3g}>'


def reports_to_json(reports:Iterable[EquivalenceReport]) -> str:
    reports = list(reports)
    return json.dumps(dict(all_hold=all(rep.holds for rep in reports),
                           reports=[rep.to_dict() for rep in reports]),
                      indent=2, sort_keys=True) + '\n'


def reports_to_text(reports:Iterable[EquivalenceReport]) -> str:
    return ''.join(rep.to_text() + '\n' for rep in reports)


def align_branch(difference:np.ndarray, interior:np.ndarray,
                 part:str='imag') -> np.ndarray:
    """
    removes the multiple of 2 pi from the real or imaginary part of a phase
    difference that minimizes it at the first interior sample
    """
    first = int(np.argmax(interior))
    offset = getattr(difference[first], part)
    shift = 2 * np.pi * np.round(offset / (2 * np.pi))
    return difference - (shift if part == 'real' else 1j * shift)


def estimate_omega_o(sig:ThreePhaseSignal) -> float:
    """median rotation speed of the trajectory (or of the phase a ICF)"""
    try:
        series = geometric_analysis(sig)
        omega = np.nanmedian(series.omega_biv[series.interior])
    except GeometryError:
        omega = float('nan')
    if not omega > 0:
        s_h = icf(analytic_signal(sig.va, sig.dt, sig.t0))
        omega = abs(np.median(s_h.omega[s_h.interior]))
    if not omega > 0:
        raise ValueError('omega_o cannot be estimated from the signal')
    return float(omega)


def signal_metrics(sig:ThreePhaseSignal, omega_o:float) -> Dict[str, float]:
    """
    diagnostics that indicate why a relation might not hold: envelope /
    carrier overlap of phase a, homopolar energy and the torsion metric
    """
    metrics = dict(omega_o=omega_o,
                   zero_sequence_energy=zero_sequence_energy(sig))
    try:
        envelope = np.abs(analytic_signal(sig.va, sig.dt, sig.t0).values)
        metrics['bedrosian_overlap'] = bedrosian_overlap(
            envelope, sig.dt, omega_o / (2 * np.pi))
    except ValueError:
        metrics['bedrosian_overlap'] = float('nan')
    try:
        metrics['torsion_metric'] = torsion_metric(geometric_analysis(sig),
                                                   sig.samples)
    except GeometryError:
        metrics['torsion_metric'] = float('nan')
    return metrics


def _prepare(sig, omega_o, metrics):
    if omega_o is None:
        omega_o = estimate_omega_o(sig)
    if metrics is None:
        metrics = signal_metrics(sig, omega_o)
    return omega_o, metrics


def check_hahn_planar(sig:ThreePhaseSignal, frame:RotatingFrame=ZERO_FRAME,
                      tol_icp:float=None, tol_icf:float=None,
                      omega_o:float=None, phase:str='a',
                      metrics:Dict[str, float]=None) \
        -> Tuple[EquivalenceReport, EquivalenceReport]:
    """
    Compares the ICP/ICF of the analytic signal of one phase with the IPP/IPF
    of the Park vector. For phases b and c their default angular shift is
    removed from the Hahn phase.
    """
    omega_o, metrics = _prepare(sig, omega_o, metrics)
    tol_icp = DEFAULT_TOL_ICP if tol_icp is None else tol_icp
    tol_icf = DEFAULT_TOL_ICF_FACTOR*omega_o if tol_icf is None else tol_icf
    z = analytic_signal(sig.phase(phase), sig.dt, sig.t0)
    phi_h = icp(z)
    s_h = phase_derivative(phi_h)
    v_dq = park(clarke(sig), frame)
    phi_m = ipp(v_dq)
    s_m = ipf(v_dq)
    delta = frame.angle(sig.t0, sig.dt, len(sig))
    omega_dq = frame.speed(sig.t0, sig.dt, len(sig))

    icp_margin = max(phi_h.edge_margin, phi_m.edge_margin)
    icp_diff = phi_m.values \
               - (phi_h.values - 1j * (delta + DEFAULT_SHIFTS[phase]))
    icp_diff = align_branch(icp_diff,
                            interior_mask(len(sig), icp_margin))
    icf_margin = max(s_h.edge_margin, s_m.edge_margin)
    icf_diff = s_m.values - (s_h.values - 1j * omega_dq)
    return (EquivalenceReport('EQ13_ICP', sig.t0, sig.dt, icp_diff,
                              np.abs(icp_diff), icp_margin, tol_icp, 'rad',
                              provenance=sig.provenance, metrics=metrics),
            EquivalenceReport('EQ13_ICF', sig.t0, sig.dt, icf_diff,
                              np.abs(icf_diff), icf_margin, tol_icf, 'rad/s',
                              provenance=sig.provenance, metrics=metrics))


def check_lei(sig:ThreePhaseSignal, frame:RotatingFrame=ZERO_FRAME,
              tol:float=None, metrics:Dict[str, float]=None) \
        -> EquivalenceReport:
    """
    Computes the Lei phase/frequency directly from the Clarke vector and
    compares it with the one rearranged from the space vector IPP/IPF in 'frame'.

    The residual is max(|d phi|, |d s| * dt) / (1 + max|phi_l|), i.e.
    relative to the magnitude of the phase values both sides are formed of.
    """
    tol = DEFAULT_TOL_LEI if tol is None else tol
    if metrics is None:
        metrics = dict(zero_sequence_energy=zero_sequence_energy(sig))
    v_ab = clarke(sig)
    v_dq = park(v_ab, frame)
    phi_m = ipp(v_dq)
    s_m = phase_derivative(phi_m)
    phi_l = lei_icp(v_ab)
    s_l = phase_derivative(phi_l)
    margin = max(s_m.edge_margin, s_l.edge_margin, frame.edge_margin)
    interior = interior_mask(len(sig), margin)
    phase_diff = align_branch(lei_from_planar(phi_m, frame).values
                              - phi_l.values, interior, 'real')
    freq_diff = lei_frequency_from_planar(s_m, frame).values - s_l.values
    scale = 1 + np.abs(phi_l.values).max()
    residual = np.maximum(np.abs(phase_diff),
                          np.abs(freq_diff) * sig.dt) / scale
    return EquivalenceReport('EQ7', sig.t0, sig.dt, phase_diff, residual,
                             margin, tol, '1', provenance=sig.provenance,
                             metrics=metrics)


def check_clarke_park(sig:ThreePhaseSignal, frame:RotatingFrame=ZERO_FRAME,
                      tol:float=None, metrics:Dict[str, float]=None) \
        -> EquivalenceReport:
    """v_dq vs. analytic(v_a) * exp(-j delta_dq), relative to max|v_ab|"""
    tol = DEFAULT_TOL_CLARKE_PARK if tol is None else tol
    if metrics is None:
        metrics = dict(zero_sequence_energy=zero_sequence_energy(sig))
    v_ab = clarke(sig)
    z = analytic_signal(sig.va, sig.dt, sig.t0)
    delta = frame.angle(sig.t0, sig.dt, len(sig))
    diff = park(v_ab, frame).values - z.values * np.exp(-1j * delta)
    scale = np.abs(v_ab.values).max()
    residual = np.abs(diff) / scale if scale > 0 else np.abs(diff)
    return EquivalenceReport('EQ12', sig.t0, sig.dt, diff, residual,
                             z.edge_margin, tol, '1',
                             provenance=sig.provenance, metrics=metrics)


def check_geometric(sig:ThreePhaseSignal, frame:RotatingFrame=ZERO_FRAME,
                    tol:float=None, omega_o:float=None,
                    metrics:Dict[str, float]=None) -> EquivalenceReport:
    """
    Compares the space vector IPF with the scalar part and the bivector
    magnitude (minus the frame speed) of the geometric frequency. Gated by a
    zero torsion.

    A trajectory without any defined torsion (it moves along a line through
    the origin) lies in every plane, so it is compared as well. Such reports
    carry the metric 'torsion_undefined'.
    """
    omega_o, metrics = _prepare(sig, omega_o, metrics)
    metrics = dict(metrics)
    tol = DEFAULT_TOL_ICF_FACTOR * omega_o if tol is None else tol
    geom = geometric_analysis(sig)
    metric = metrics.get('torsion_metric')
    if metric is None:
        metric = torsion_metric(geom, sig.samples)
    if np.isnan(metric):
        logger.info('EQ15: torsion undefined at all interior samples')
        metrics['torsion_undefined'] = 1.0
    elif metric > TORSION_THRESHOLD:
        logger.warning('EQ15 skipped: torsion metric %g', metric)
        return EquivalenceReport.gated(
            'EQ15', sig, tol, 'rad/s', 'nonzero torsion',
            geom.edge_margin, provenance=sig.provenance, metrics=metrics)
    s_m = ipf(park(clarke(sig), frame))
    omega_dq = frame.speed(sig.t0, sig.dt, len(sig))
    rho_diff = s_m.rho - geom.rho
    omega_diff = s_m.omega - (geom.omega_biv - omega_dq)
    residual = np.maximum(np.abs(rho_diff), np.abs(omega_diff))
    return EquivalenceReport('EQ15', sig.t0, sig.dt,
                             rho_diff + 1j * omega_diff, residual,
                             max(s_m.edge_margin, geom.edge_margin), tol,
                             'rad/s', provenance=sig.provenance,
                             metrics=metrics)


def check_hilbert_pair(sig:ThreePhaseSignal, tol:float=None,
                       omega_o:float=None, coordinate_tol:float=None,
                       metrics:Dict[str, float]=None) -> EquivalenceReport:
    """
    Finds the plane of the trajectory (mu aligned to phase a), checks the
    coordinate condition v_xi == H{v_mu} and compares the ICF of the analytic
    v_mu with the IPF of v_mu + j v_xi.
    """
    omega_o, metrics = _prepare(sig, omega_o, metrics)
    metrics = dict(metrics)
    tol = DEFAULT_TOL_ICF_FACTOR * omega_o if tol is None else tol
    coordinate_tol = DEFAULT_TOL_COORDINATE if coordinate_tol is None \
                     else coordinate_tol
    try:
        basis = find_plane(sig, mu_reference=PHASE_A_AXIS)
    except NonPlanarError:
        return EquivalenceReport.gated('EQ17', sig, tol, 'rad/s',
                                       'nonzero torsion',
                                       provenance=sig.provenance,
                                       metrics=metrics)
    except GeometryError as exc:
        return EquivalenceReport.gated('EQ17', sig, tol, 'rad/s', str(exc),
                                       provenance=sig.provenance,
                                       metrics=metrics)
    pair = hilbert_pair_check(basis, sig)
    metrics['coordinate_residual'] = pair.residual
    metrics['plane_residual'] = basis.residual
    reason = None
    if pair.residual > coordinate_tol:
        reason = 'coordinate condition violated'
        if pair.orientation_reversed:
            reason += ' (xi axis reversed)'
    coords = basis.coordinates(sig)
    s_hahn = icf(analytic_signal(coords.real, sig.dt, sig.t0))
    s_plane = ipf(coords)
    diff = s_plane.values - s_hahn.values
    return EquivalenceReport('EQ17', sig.t0, sig.dt, diff, np.abs(diff),
                             max(s_hahn.edge_margin, s_plane.edge_margin),
                             tol, 'rad/s', reason, provenance=sig.provenance,
                             metrics=metrics)


def resolve_relations(relations:Optional[Iterable[str]]) -> Tuple[str, ...]:
    """
    expands relation groups (EQ13), removes duplicates and returns the
    relations in canonical order
    """
    if relations is None:
        return RELATIONS
    requested = set()
    for relation in relations:
        relation = relation.strip().upper()
        if relation in RELATION_GROUPS:
            requested.update(RELATION_GROUPS[relation])
        elif relation in RELATIONS:
            requested.add(relation)
        else:
            raise UnknownRelationError(relation)
    if not requested:
        raise ValueError('no relation requested')
    return tuple(rel for rel in RELATIONS if rel in requested)


def run_checks(sig:ThreePhaseSignal, relations:Iterable[str]=None,
               frame:RotatingFrame=ZERO_FRAME,
               tolerances:Dict[str, float]=None,
               omega_o:float=None) -> List[EquivalenceReport]:
    """
    Runs the requested relations (default: all) concurrently and returns
    their reports in canonical order. 'tolerances' may override the
    defaults by the keys in TOLERANCE_NAMES ('icf' is absolute in rad/s).
    """
    relations = resolve_relations(relations)
    tolerances = dict(tolerances or {})
    unknown = set(tolerances) - set(TOLERANCE_NAMES)
    if unknown:
        raise ValueError(f'unknown tolerances {sorted(unknown)}')
    omega_o, metrics = _prepare(sig, omega_o, None)
    tol_icf = tolerances.get('icf')

    tasks = {}
    if 'EQ7' in relations:
        tasks['EQ7'] = lambda: [check_lei(sig, frame, tolerances.get('lei'),
                                          metrics)]
    if 'EQ12' in relations:
        tasks['EQ12'] = lambda: [check_clarke_park(
            sig, frame, tolerances.get('clarke_park'), metrics)]
    if 'EQ13_ICP' in relations or 'EQ13_ICF' in relations:
        tasks['EQ13'] = lambda: list(check_hahn_planar(
            sig, frame, tolerances.get('icp'), tol_icf, omega_o,
            metrics=metrics))
    if 'EQ15' in relations:
        tasks['EQ15'] = lambda: [check_geometric(sig, frame, tol_icf,
                                                 omega_o, metrics)]
    if 'EQ17' in relations:
        tasks['EQ17'] = lambda: [check_hilbert_pair(
            sig, tol_icf, omega_o, tolerances.get('coordinate'), metrics)]

    with ThreadPoolExecutor(max_workers=len(tasks)) as executor:
        futures = [executor.submit(task) for task in tasks.values()]
        reports = {rep.relation: rep
                   for future in futures for rep in future.result()}
    for relation in relations:
        logger.debug('%s', reports[relation].to_text())
    return [reports[relation] for relation in relations]

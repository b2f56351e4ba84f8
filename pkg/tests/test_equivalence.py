import json
import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from ifreq.signal_model import ThreePhaseSignal
from ifreq.space_vector import RotatingFrame, ZERO_FRAME
from ifreq.equivalence import EquivalenceReport, UnknownRelationError, \
    RELATIONS, check_hahn_planar, check_lei, check_clarke_park, \
    check_geometric, check_hilbert_pair, run_checks, resolve_relations, \
    reports_to_json, reports_to_text, align_branch, estimate_omega_o, \
    signal_metrics, DEFAULT_TOL_ICP
from .helpers import OMEGA_O, DT, N


T = np.arange(N) * DT
TILT = Rotation.from_rotvec([0.3, -0.2, 0.5])

FRAMES = [ZERO_FRAME,
          RotatingFrame.ramp(OMEGA_O),
          RotatingFrame.ramp(0.3 * OMEGA_O)]


def sampled_frame():
    return RotatingFrame.sampled(0.0, DT,
                                 0.5*OMEGA_O*T + 0.1*np.sin(2*np.pi*3*T))


def random_smooth_signal(rng, n=64, dt=1e-3):
    t = np.arange(n) * dt
    omega = rng.uniform(2*np.pi*20, 2*np.pi*80)
    shifts = np.array([0, -2*np.pi/3, 2*np.pi/3])
    samples = np.cos(omega * t[:, np.newaxis] + shifts)
    for _ in range(2):
        samples += rng.uniform(0, 0.15, 3) * np.sin(
            2*np.pi*rng.uniform(0, 5, 3) * t[:, np.newaxis]
            + rng.uniform(0, 2*np.pi, 3))
    frame = RotatingFrame.ramp(rng.uniform(-2*omega, 2*omega),
                               rng.uniform(-np.pi, np.pi))
    return ThreePhaseSignal(0.0, dt, samples), frame


class TestEquivalenceReport:

    def make_report(self, residual, edge_margin=1, tolerance=0.25, **kwargs):
        return EquivalenceReport('EQ12', 0.0, 1.0, np.zeros(len(residual)),
                                 residual, edge_margin, tolerance, '1',
                                 **kwargs)

    def test_init_evaluatesInteriorOnly(self):
        report = self.make_report([0.5, 0.1, 0.2, 0.9])
        assert report.interior_max == 0.2
        assert report.interior_rms == pytest.approx(np.sqrt(0.025))
        assert report.excluded_samples == 2
        assert report.holds
        assert report.verdict == 'holds'

    def test_holds_onMaxAboveTolerance_returnsFalse(self):
        report = self.make_report([0, 0.3, 0.2, 0])
        assert not report.holds
        assert report.verdict == 'violated'

    def test_init_onUndefinedSamples_countsThem(self):
        report = self.make_report([0, np.nan, 0.1, 0], edge_margin=0)
        assert report.interior_max == 0.1
        assert report.metrics['undefined_samples'] == 1
        assert report.holds

    def test_init_onAllUndefined_isViolated(self):
        report = self.make_report([np.nan] * 4)
        assert report.interior_max == float('inf')
        assert report.reason == 'residual undefined at all interior samples'
        assert not report.holds

    def test_init_onNoInteriorSample_isViolated(self):
        report = self.make_report([0.0] * 4, edge_margin=2)
        assert report.reason == 'no interior samples'
        assert not report.holds

    def test_holds_onReason_returnsFalse(self):
        report = self.make_report([0.0] * 4, reason='nonzero torsion')
        assert report.interior_max == 0
        assert not report.holds

    def test_gated_returnsUndefinedResidual(self, balanced_sig):
        report = EquivalenceReport.gated('EQ15', balanced_sig, 1.0, 'rad/s',
                                         'nonzero torsion', 1)
        assert len(report) == N
        assert np.isnan(report.residual).all()
        assert report.reason == 'nonzero torsion'
        assert report.interior_max == float('inf')

    def test_t_returnsSampleTimes(self):
        report = EquivalenceReport('EQ7', 1.0, 0.5, np.zeros(3), np.zeros(3),
                                   0, 1, '1')
        assert list(report.t) == [1.0, 1.5, 2.0]

    def test_toText(self):
        assert self.make_report([0.5, 0.1, 0.2, 0.9]).to_text() \
               == 'EQ12      holds    max=0.2 tol=0.25 [1]'
        assert self.make_report([0.0] * 4, reason='xyz').to_text() \
               == 'EQ12      violated max=0 tol=0.25 [1] (xyz)'

    def test_toDict(self):
        report = self.make_report([0.5, 0.1, np.nan, 0.9],
                                  provenance='spec:abc', metrics=dict(x=1))
        desc = report.to_dict()
        assert desc['relation'] == 'EQ12'
        assert desc['verdict'] == 'holds'
        assert desc['reason'] is None
        assert desc['interior_max'] == 0.1
        assert desc['residual'] == [0.5, 0.1, None, 0.9]
        assert desc['provenance'] == 'spec:abc'
        assert desc['metrics'] == dict(x=1.0, undefined_samples=1.0)
        assert (desc['t0'], desc['dt'], desc['n']) == (0.0, 1.0, 4)
        assert 'residual' not in report.to_dict(with_series=False)

    def test_toDict_onInfiniteMax_returnsNone(self):
        assert self.make_report([np.nan] * 4).to_dict()['interior_max'] \
               is None

    def test_toJson_isParsable(self):
        report = self.make_report([np.nan] * 4)
        assert json.loads(report.to_json())['verdict'] == 'violated'

    def test_reportsToJson(self):
        reports = [self.make_report([0.5, 0.1, 0.2, 0.9]),
                   self.make_report([0, 0.3, 0.2, 0])]
        desc = json.loads(reports_to_json(reports))
        assert desc['all_hold'] is False
        assert [rep['verdict'] for rep in desc['reports']] \
               == ['holds', 'violated']

    def test_reportsToText_returnsOneLinePerReport(self):
        reports = [self.make_report([0.5, 0.1, 0.2, 0.9])] * 2
        assert reports_to_text(reports).splitlines() \
               == ['EQ12      holds    max=0.2 tol=0.25 [1]'] * 2


def test_alignBranch_removesTurnsAtFirstInteriorSample():
    diff = np.array([9.0, 2*np.pi*3 + 0.1, 2*np.pi*3 - 0.2]) * 1j
    aligned = align_branch(diff, np.array([False, True, True]))
    np.testing.assert_allclose(aligned.imag, [9 - 6*np.pi, 0.1, -0.2])
    np.testing.assert_allclose(
        align_branch(diff.imag + 0j, np.array([False, True, True]),
                     'real').real, [9 - 6*np.pi, 0.1, -0.2])


class TestSignalMetrics:

    def test_estimateOmegaO_onBalanced_returnsNominal(self, balanced_sig):
        assert estimate_omega_o(balanced_sig) == pytest.approx(OMEGA_O,
                                                               rel=1e-3)

    def test_estimateOmegaO_onSinglePhase_usesAnalyticSignal(self):
        sig = ThreePhaseSignal(0, DT, np.stack(
            [np.cos(OMEGA_O * T), np.zeros(N), np.zeros(N)], 1))
        assert estimate_omega_o(sig) == pytest.approx(OMEGA_O, rel=1e-6)

    def test_estimateOmegaO_onAllZero_raisesValueError(self):
        with pytest.raises(ValueError):
            estimate_omega_o(ThreePhaseSignal(0, DT, np.zeros((64, 3))))

    def test_onAmplitudeModulation(self, am_sig):
        metrics = signal_metrics(am_sig, OMEGA_O)
        assert metrics['omega_o'] == OMEGA_O
        assert metrics['bedrosian_overlap'] == 0
        assert metrics['zero_sequence_energy'] < 1e-12
        assert metrics['torsion_metric'] < 1e-4

    def test_onZeroSequence(self, zero_sequence_sig):
        metrics = signal_metrics(zero_sequence_sig, OMEGA_O)
        assert metrics['zero_sequence_energy'] > 0.03
        assert metrics['torsion_metric'] > 1e-2


class TestCheckHahnPlanar:

    @pytest.mark.parametrize('frame', FRAMES + [sampled_frame()])
    def test_onBalanced_holds(self, balanced_sig, frame):
        icp_report, icf_report = check_hahn_planar(balanced_sig, frame)
        assert icp_report.relation == 'EQ13_ICP'
        assert icf_report.relation == 'EQ13_ICF'
        assert icp_report.holds, icp_report.to_text()
        assert icf_report.holds, icf_report.to_text()
        assert icf_report.tolerance == pytest.approx(1e-3 * OMEGA_O,
                                                     rel=1e-3)

    @pytest.mark.parametrize('phase', ['b', 'c'])
    def test_onOtherPhase_removesDefaultShift(self, balanced_sig, phase):
        icp_report, icf_report = check_hahn_planar(
            balanced_sig, RotatingFrame.ramp(0.3 * OMEGA_O), phase=phase)
        assert icp_report.holds and icf_report.holds

    @pytest.mark.parametrize('frame', FRAMES)
    def test_onAmplitudeModulation_holds(self, am_sig, frame):
        for report in check_hahn_planar(am_sig, frame):
            assert report.holds, report.to_text()

    def test_onNegativeSequence_isViolated(self, negative_sequence_sig):
        icp_report, icf_report = check_hahn_planar(
            negative_sequence_sig, omega_o=OMEGA_O)
        assert not icp_report.holds
        assert not icf_report.holds
        assert icp_report.interior_max \
               == pytest.approx(np.log(1.1 / 0.9), rel=0.05)

    def test_onNegativeSequence_differenceOscillatesAtTwiceFrequency(
            self, negative_sequence_sig):
        _, icf_report = check_hahn_planar(negative_sequence_sig,
                                          omega_o=OMEGA_O)
        diff = icf_report.difference[icf_report.interior]
        spectrum = np.abs(np.fft.fft(diff - diff.mean()))
        freqs = np.fft.fftfreq(len(diff), DT)
        assert freqs[np.argmax(spectrum)] == pytest.approx(-100, rel=0.2)

    def test_edgeMargin_coversHilbertGuard(self, balanced_sig):
        icp_report, icf_report = check_hahn_planar(balanced_sig)
        assert icp_report.edge_margin == N // 32
        assert icf_report.edge_margin == N // 32 + 1

    def test_onGivenTolerances_usesThem(self, negative_sequence_sig):
        icp_report, icf_report = check_hahn_planar(
            negative_sequence_sig, tol_icp=1.0, tol_icf=1e3, omega_o=OMEGA_O)
        assert icp_report.holds and icf_report.holds


class TestCheckLei:

    @pytest.mark.parametrize('frame', FRAMES + [
        RotatingFrame.ramp(-0.5 * OMEGA_O, 1.2), sampled_frame()])
    def test_onAmplitudeModulation_holds(self, am_sig, frame):
        report = check_lei(am_sig, frame)
        assert report.relation == 'EQ7'
        assert report.holds, report.to_text()

    def test_onUnbalancedSignals_holds(self, negative_sequence_sig,
                                       zero_sequence_sig):
        for sig in (negative_sequence_sig, zero_sequence_sig):
            assert check_lei(sig, RotatingFrame.ramp(OMEGA_O)).holds

    def test_onRandomSmoothSignals_holds(self):
        rng = np.random.default_rng(20240611)
        failures = []
        for draw in range(1000):
            sig, frame = random_smooth_signal(rng)
            report = check_lei(sig, frame)
            if not report.holds:
                failures.append((draw, report.interior_max))
        assert not failures


class TestCheckClarkePark:

    @pytest.mark.parametrize('frame', FRAMES)
    def test_onBalanced_holds(self, balanced_sig, frame):
        report = check_clarke_park(balanced_sig, frame)
        assert report.relation == 'EQ12'
        assert report.holds, report.to_text()

    def test_onNegativeSequence_isViolated(self, negative_sequence_sig):
        report = check_clarke_park(negative_sequence_sig)
        assert report.interior_max == pytest.approx(0.2 / 1.1, rel=0.05)

    def test_onZeroSequence_isViolated(self, zero_sequence_sig):
        assert not check_clarke_park(zero_sequence_sig).holds


class TestCheckGeometric:

    @pytest.mark.parametrize('frame', [ZERO_FRAME,
                                       RotatingFrame.ramp(0.2 * OMEGA_O)])
    def test_onAmplitudeModulation_holds(self, am_sig, frame):
        report = check_geometric(am_sig, frame)
        assert report.relation == 'EQ15'
        assert report.holds, report.to_text()

    def test_onZeroSequence_isGated(self, zero_sequence_sig):
        report = check_geometric(zero_sequence_sig)
        assert report.reason == 'nonzero torsion'
        assert not report.holds
        assert np.isnan(report.residual).all()
        assert report.metrics['torsion_metric'] > 1e-4

    def test_onStraightLine_comparesAndFlagsUndefinedTorsion(self):
        t = np.arange(16) * 0.1
        sig = ThreePhaseSignal(0, 0.1, np.outer(1 + t, [1, -0.5, -0.5]))
        report = check_geometric(sig, omega_o=OMEGA_O)
        assert report.reason is None
        assert report.metrics['torsion_undefined'] == 1
        assert np.isnan(report.metrics['torsion_metric'])
        assert report.holds, report.to_text()

    def test_onDefinedTorsion_doesNotFlagIt(self, am_sig):
        report = check_geometric(am_sig)
        assert 'torsion_undefined' not in report.metrics


class TestCheckHilbertPair:

    def test_onBalanced_holds(self, balanced_sig):
        report = check_hilbert_pair(balanced_sig)
        assert report.relation == 'EQ17'
        assert report.holds, report.to_text()
        assert report.metrics['coordinate_residual'] < 1e-6
        assert report.metrics['plane_residual'] < 1e-9

    def test_onTiltedPlane_holds(self, balanced_sig):
        sig = ThreePhaseSignal(0, DT, TILT.apply(balanced_sig.samples))
        report = check_hilbert_pair(sig)
        assert report.holds, report.to_text()

    def test_onNegativeSequenceHarmonic_isViolated(self, harmonic_sig):
        report = check_hilbert_pair(harmonic_sig)
        assert report.reason == 'coordinate condition violated'
        assert not report.holds
        assert report.metrics['coordinate_residual'] \
               == pytest.approx(0.1 / 1.05, rel=1e-2)

    def test_onZeroSequence_isGated(self, zero_sequence_sig):
        report = check_hilbert_pair(zero_sequence_sig)
        assert report.reason == 'nonzero torsion'
        assert report.interior_max == float('inf')

    def test_onSinglePhase_isGatedByMissingPlane(self):
        sig = ThreePhaseSignal(0, DT, np.stack(
            [np.cos(OMEGA_O * T), np.zeros(N), np.zeros(N)], 1))
        report = check_hilbert_pair(sig, omega_o=OMEGA_O)
        assert report.reason == 'no sample defines a plane of rotation'
        assert not report.holds


class TestResolveRelations:

    def test_onNone_returnsAll(self):
        assert resolve_relations(None) == RELATIONS

    def test_expandsGroupsAndSortsCanonically(self):
        assert resolve_relations(['eq17', 'EQ13', 'EQ7', 'EQ7']) \
               == ('EQ7', 'EQ13_ICP', 'EQ13_ICF', 'EQ17')

    def test_onUnknownRelation_raisesUnknownRelationError(self):
        with pytest.raises(UnknownRelationError) as exc_info:
            resolve_relations(['EQ99'])
        assert exc_info.value.relation == 'EQ99'
        assert isinstance(exc_info.value, ValueError)

    def test_onEmpty_raisesValueError(self):
        with pytest.raises(ValueError):
            resolve_relations([])


class TestRunChecks:

    def test_onBalanced_allHoldInCanonicalOrder(self, balanced_sig):
        reports = run_checks(balanced_sig)
        assert [rep.relation for rep in reports] == list(RELATIONS)
        assert all(rep.holds for rep in reports), \
               reports_to_text(reports)

    def test_onSynchronousFrame_allHold(self, balanced_sig):
        reports = run_checks(balanced_sig, frame=RotatingFrame.ramp(OMEGA_O))
        assert all(rep.holds for rep in reports), \
               reports_to_text(reports)

    def test_onSelection_returnsSelectedOnly(self, balanced_sig):
        reports = run_checks(balanced_sig, ['EQ13'])
        assert [rep.relation for rep in reports] == ['EQ13_ICP', 'EQ13_ICF']

    def test_onUnbalanced_reportsViolations(self, negative_sequence_sig):
        reports = {rep.relation: rep
                   for rep in run_checks(negative_sequence_sig)}
        assert reports['EQ7'].holds
        assert not reports['EQ12'].holds
        assert not reports['EQ13_ICP'].holds
        assert not reports['EQ13_ICF'].holds

    def test_onToleranceOverride_usesIt(self, negative_sequence_sig):
        report, = run_checks(negative_sequence_sig, ['EQ13_ICP'],
                             tolerances=dict(icp=1.0))
        assert report.tolerance == 1.0
        assert report.holds

    def test_onUnknownTolerance_raisesValueError(self, balanced_sig):
        with pytest.raises(ValueError):
            run_checks(balanced_sig, tolerances=dict(foo=1.0))

    def test_onGivenOmegaO_sharesMetrics(self, balanced_sig):
        reports = run_checks(balanced_sig, ['EQ13', 'EQ15'], omega_o=300.0)
        assert all(rep.metrics['omega_o'] == 300.0 for rep in reports)
        assert reports[0].tolerance == DEFAULT_TOL_ICP
        assert reports[1].tolerance == pytest.approx(0.3)

    def test_isDeterministic(self, am_sig):
        first = [rep.to_dict() for rep in run_checks(am_sig)]
        second = [rep.to_dict() for rep in run_checks(am_sig)]
        assert first == second

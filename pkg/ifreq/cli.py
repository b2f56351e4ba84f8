"""
Command line front end:

    ifreq generate --spec SPEC.json [--t0 T0] [--fs FS] [--duration D]
    ifreq analyze  (--input TRACE.csv | --spec SPEC.json) [--frame FRAME]
    ifreq compare  (--input TRACE.csv | --spec SPEC.json) [--frame FRAME]
                   [--relations EQ7,EQ13,...] [--tol-icf TOL] [--tol-icp TOL]

Exit status: 0 = success (all requested relations hold), 1 = a relation is
violated, 2 = usage or input error.
"""
import argparse
import datetime
import json
import logging
import os
import sys
import numpy as np
import pandas as pd
from pathlib import Path
from typing import List, Optional

from . import __version__
from .series import interior_mask
from .signal_model import ThreePhaseSignal, SignalSpec, generate, \
    read_trace, write_trace, load_spec, dump_spec
from .signal_model.trace_io import FLOAT_FORMAT
from .analytic import analytic_signal, icf
from .space_vector import RotatingFrame, ZERO_FRAME, clarke, park, ipf
from .geometric import geometric_analysis
from .equivalence import resolve_relations, run_checks, estimate_omega_o, \
    signal_metrics, reports_to_json, reports_to_text


logger = logging.getLogger(__name__)


LOG_ENV_VAR = 'IFREQ_LOG'

FORMATS = ('csv', 'json')

ANALYSIS_COLUMNS = ['t', 'rho_h', 'omega_h', 'rho_m', 'omega_m', 'rho_geom',
                    'omega_biv', 'torsion', 'edge']

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    """invalid command line arguments"""


def parse_frame(text:str) -> RotatingFrame:
    """
    'zero' (Clarke frame), 'constant:<rad/s>' (frame turning with constant
    speed from angle 0) or 'ramp:<rad/s>,<rad>' (with initial angle)
    """
    kind, _, params = text.strip().partition(':')
    try:
        if kind == 'zero' and not params:
            return ZERO_FRAME
        elif kind == 'constant':
            return RotatingFrame.ramp(float(params), 0.0)
        elif kind == 'ramp':
            omega, delta0 = params.split(',')
            return RotatingFrame.ramp(float(omega), float(delta0))
    except ValueError:
        pass
    raise ConfigError(f'invalid frame {text!r} (expected "zero", '
                      f'"constant:<rad/s>" or "ramp:<rad/s>,<rad>")')


class RunConfig:
    """validated settings of one CLI invocation"""

    def __init__(self, command:str, *, spec_path:Path=None,
                 input_path:Path=None, frame:RotatingFrame=ZERO_FRAME,
                 tol_icf:float=None, tol_icp:float=None,
                 out_dir:Path=Path('.'), formats=FORMATS, relations=None,
                 t0:float=0.0, fs:float=10000.0, duration:float=1.0,
                 omega_o:float=None, argv:List[str]=()):
        if (spec_path is None) == (input_path is None):
            raise ConfigError('exactly one of --spec and --input has to be '
                              'given')
        if command == 'generate' and spec_path is None:
            raise ConfigError('generate requires --spec')
        if not (np.isfinite(fs) and fs > 0):
            raise ConfigError(f'--fs has to be positive (got {fs})')
        if not (np.isfinite(duration) and duration > 0):
            raise ConfigError(f'--duration has to be positive '
                              f'(got {duration})')
        if not np.isfinite(t0):
            raise ConfigError(f'--t0 has to be finite (got {t0})')
        for name, tol in (('--tol-icf', tol_icf), ('--tol-icp', tol_icp),
                          ('--omega-o', omega_o)):
            if tol is not None and not (np.isfinite(tol) and tol > 0):
                raise ConfigError(f'{name} has to be positive (got {tol})')
        unknown = set(formats) - set(FORMATS)
        if unknown or not formats:
            raise ConfigError(f'--format has to be a list of '
                              f'{", ".join(FORMATS)}')
        self.command = command
        self.spec_path = spec_path
        self.input_path = input_path
        self.frame = frame
        self.tol_icf = tol_icf
        self.tol_icp = tol_icp
        self.out_dir = Path(out_dir)
        self.formats = tuple(formats)
        self.relations = resolve_relations(relations)
        self.t0 = float(t0)
        self.fs = float(fs)
        self.duration = float(duration)
        self.omega_o = omega_o
        self.argv = list(argv)

    @classmethod
    def from_args(cls, args:argparse.Namespace, argv=()) -> 'RunConfig':
        return cls(args.command,
                   spec_path=args.spec, input_path=args.input,
                   frame=parse_frame(args.frame),
                   tol_icf=args.tol_icf, tol_icp=args.tol_icp,
                   out_dir=args.out_dir,
                   formats=[fmt.strip() for fmt in args.format.split(',')],
                   relations=args.relations.split(',')
                             if args.relations else None,
                   t0=args.t0, fs=args.fs, duration=args.duration,
                   omega_o=args.omega_o, argv=argv)

    @property
    def sample_count(self) -> int:
        return int(round(self.duration * self.fs))

    @property
    def sampling(self):
        return dict(t0=self.t0, dt=1.0 / self.fs, n=self.sample_count)

    def load_spec(self) -> SignalSpec:
        return load_spec(self.spec_path)

    def load_signal(self) -> ThreePhaseSignal:
        if self.input_path is not None:
            return read_trace(self.input_path)
        return generate(self.load_spec(), self.t0, 1.0 / self.fs,
                        self.sample_count)

    def nominal_omega(self, sig:ThreePhaseSignal) -> float:
        if self.omega_o is not None:
            return self.omega_o
        elif self.spec_path is not None:
            return self.load_spec().omega_o
        else:
            return estimate_omega_o(sig)


def _write_csv(frame:pd.DataFrame, path:Path):
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT,
                 lineterminator='\n', na_rep='nan')


def _write_json(desc, path:Path):
    path.write_text(json.dumps(desc, indent=2, sort_keys=True) + '\n',
                    encoding='utf8')


def _json_safe(value):
    if isinstance(value, dict):
        return {key: _json_safe(val) for key, val in value.items()}
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def write_run_metadata(config:RunConfig):
    """
    the only output that differs between identical runs (it holds absolute
    paths, so data outputs do not)
    """
    inputs = {name: str(path.resolve())
              for name, path in (('spec', config.spec_path),
                                 ('input', config.input_path))
              if path is not None}
    _write_json(dict(version=__version__, command=config.command,
                     argv=config.argv, inputs=inputs,
                     timestamp=datetime.datetime.now(
                         datetime.timezone.utc).isoformat()),
                config.out_dir / 'run.json')


def cmd_generate(config:RunConfig) -> int:
    spec = config.load_spec()
    sig = generate(spec, config.t0, 1.0 / config.fs, config.sample_count)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    if 'csv' in config.formats:
        write_trace(sig, config.out_dir / 'trace.csv')
    if 'json' in config.formats:
        dump_spec(spec, config.out_dir / 'trace.spec.json', config.sampling)
    logger.info('generated %d samples of %s', len(sig), sig.provenance)
    return EXIT_OK


def analysis_table(sig:ThreePhaseSignal,
                   frame:RotatingFrame=ZERO_FRAME) -> pd.DataFrame:
    s_h = icf(analytic_signal(sig.va, sig.dt, sig.t0))
    s_m = ipf(park(clarke(sig), frame))
    geom = geometric_analysis(sig)
    margin = max(s_h.edge_margin, s_m.edge_margin, geom.edge_margin)
    return pd.DataFrame(
        dict(t=sig.t, rho_h=s_h.rho, omega_h=s_h.omega,
             rho_m=s_m.rho, omega_m=s_m.omega,
             rho_geom=geom.rho, omega_biv=geom.omega_biv,
             torsion=geom.torsion,
             edge=~interior_mask(len(sig), margin)),
        columns=ANALYSIS_COLUMNS)


def cmd_analyze(config:RunConfig) -> int:
    sig = config.load_signal()
    table = analysis_table(sig, config.frame)
    omega_o = config.nominal_omega(sig)
    interior = table[~table['edge']]
    summary = dict(
        provenance=sig.provenance, t0=sig.t0, dt=sig.dt, n=len(sig),
        frame=config.frame.to_dict(),
        edge_margin=int(table['edge'].sum()) // 2,
        median={col: float(interior[col].median())
                for col in ANALYSIS_COLUMNS[1:-1]},
        metrics=signal_metrics(sig, omega_o))
    config.out_dir.mkdir(parents=True, exist_ok=True)
    if 'csv' in config.formats:
        _write_csv(table, config.out_dir / 'analysis.csv')
    if 'json' in config.formats:
        _write_json(_json_safe(summary), config.out_dir / 'analysis.json')
    return EXIT_OK


def cmd_compare(config:RunConfig) -> int:
    sig = config.load_signal()
    tolerances = {}
    if config.tol_icf is not None:
        tolerances['icf'] = config.tol_icf
    if config.tol_icp is not None:
        tolerances['icp'] = config.tol_icp
    reports = run_checks(sig, config.relations, config.frame, tolerances,
                         config.nominal_omega(sig))
    config.out_dir.mkdir(parents=True, exist_ok=True)
    text = reports_to_text(reports)
    (config.out_dir / 'report.txt').write_text(text, encoding='utf8')
    if 'json' in config.formats:
        (config.out_dir / 'report.json').write_text(reports_to_json(reports),
                                                    encoding='utf8')
    if 'csv' in config.formats:
        residuals = pd.DataFrame({'t': sig.t})
        for report in reports:
            residuals[report.relation] = report.residual
        _write_csv(residuals, config.out_dir / 'residuals.csv')
    sys.stdout.write(text)
    return EXIT_OK if all(rep.holds for rep in reports) else EXIT_VIOLATED


COMMANDS = dict(generate=cmd_generate, analyze=cmd_analyze,
                compare=cmd_compare)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='ifreq',
        description='instantaneous complex phase/frequency of three-phase '
                    'signals and the relations between its formulations')
    parser.add_argument('--version', action='version',
                        version=f'%(prog)s {__version__}')
    subparsers = parser.add_subparsers(dest='command', required=True)
    for name, descr in [('generate', 'sample a signal specification'),
                       ('analyze', 'per sample ICF, IPF and geometric '
                                   'frequency'),
                       ('compare', 'check the equivalence relations')]:
        cmd = subparsers.add_parser(name, help=descr)
        cmd.add_argument('--spec', type=Path, help='signal spec (JSON)')
        cmd.add_argument('--out-dir', type=Path, default=Path('.'))
        cmd.add_argument('--format', default=','.join(FORMATS),
                         help='comma separated list of csv, json')
        cmd.add_argument('--t0', type=float, default=0.0,
                         help='start time in s (with --spec)')
        cmd.add_argument('--fs', type=float, default=10000.0,
                         help='sampling rate in Hz (with --spec)')
        cmd.add_argument('--duration', type=float, default=1.0,
                         help='record length in s (with --spec)')
        if name == 'generate':
            cmd.set_defaults(input=None, frame='zero', tol_icf=None,
                             tol_icp=None, relations=None, omega_o=None)
            continue
        cmd.add_argument('--input', type=Path, help='trace (CSV)')
        cmd.add_argument('--frame', default='zero',
                         help='zero | constant:<rad/s> | ramp:<rad/s>,<rad>')
        cmd.add_argument('--omega-o', type=float,
                         help='nominal angular frequency in rad/s')
        if name == 'compare':
            cmd.add_argument('--relations',
                             help='comma separated relation ids')
            cmd.add_argument('--tol-icf', type=float,
                             help='ICF tolerance in rad/s')
            cmd.add_argument('--tol-icp', type=float,
                             help='ICP tolerance in rad')
        else:
            cmd.set_defaults(tol_icf=None, tol_icp=None, relations=None)
    return parser


def setup_logging():
    level = getattr(logging, os.environ.get(LOG_ENV_VAR, '').upper(), None)
    logging.basicConfig(
        level=level if isinstance(level, int) else logging.WARNING,
        stream=sys.stderr,
        format='%(levelname)s %(name)s: %(message)s')


def main(argv:Optional[List[str]]=None) -> int:
    setup_logging()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        config = RunConfig.from_args(args, argv)
        result = COMMANDS[config.command](config)
        write_run_metadata(config)
        return result
    except (ValueError, OSError) as exc:
        print(f'ifreq: error: {exc}', file=sys.stderr)
        return EXIT_USAGE

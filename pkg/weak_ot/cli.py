"""
Command-line runner for the scenario catalog.

    weak-ot --scenario cks-basis-attack --trials 100000 --seed 7

Exit status is 0 when every checked row passes, 1 when a row fails and 2 on
usage errors.
"""
import argparse
import csv
import io
import json
import logging
import sys

from . import __version__, settings
from .catalog import FAIL, scenarios, run_scenario
from .exceptions import ImproperlyConfigured, WeakOTError
from .transcript import OUTCOME, PROTOCOL, TranscriptEvent

logger = logging.getLogger(__name__)

CSV = 'csv'
JSONL = 'jsonl'
FORMATS = (CSV, JSONL)

HEADER = ['scenario', 'trials', 'p_hat', 'ci_low', 'ci_high', 'target', 'margin', 'verdict']

ALL = 'all'

# Keys of a config document, mirroring the flags
CONFIG_KEYS = {
    'scenario', 'trials', 'seed', 'k', 'n', 'alice', 'bob', 'out', 'format',
    'workers', 'alice_params', 'bob_params', 'tolerance', 'score',
}


def _format_value(value):
    if value is None:
        return ''
    if isinstance(value, float):
        return format(value, '.10f')
    return str(value)


def emit_report(results, format=CSV):
    """
    Returns the report bytes of `results`, a list of ResultRow.

    CSV has one row per result under a fixed header. JSON lines use the
    transcript event encoding, one outcome event per result.
    """
    if format == CSV:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(HEADER)
        for row in results:
            payload = row.to_payload()
            writer.writerow([_format_value(payload[key]) for key in HEADER])
        return buffer.getvalue().encode('utf-8')
    if format == JSONL:
        lines = []
        for seq, row in enumerate(results):
            payload = dict(row.to_payload(), type='report-row')
            lines.append(TranscriptEvent(seq, OUTCOME, PROTOCOL, payload).encode() + '\n')
        return ''.join(lines).encode('utf-8')
    raise ValueError(
        "Unsupported format '{format}', choose one of {formats}.".format(
            format=format,
            formats=', '.join(FORMATS),
        )
    )


def positive_int(value):
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError('{value} should be at least 1'.format(value=value))
    return number


def get_parser():
    parser = argparse.ArgumentParser(
        prog='weak-ot',
        description='Simulate weak oblivious transfer and check its cheating bounds.',
    )
    parser.add_argument(
        '--scenario', action='append', default=None,
        help="catalog scenario, repeatable, or 'all' ({names})".format(
            names=', '.join(scenarios.names()),
        ),
    )
    parser.add_argument('--trials', type=positive_int, help='trials per estimate')
    parser.add_argument('--seed', type=int, help='master seed')
    parser.add_argument('--k', type=positive_int, help='triples per Protocol B execution')
    parser.add_argument('--n', type=positive_int, help='runs per execution, a multiple of 3')
    parser.add_argument('--alice', help='Alice strategy of the custom scenario')
    parser.add_argument('--bob', help='Bob strategy of the custom scenario')
    parser.add_argument('--out', help='report path, stdout by default')
    parser.add_argument('--format', choices=FORMATS, help='report format (default: csv)')
    parser.add_argument(
        '--workers', type=positive_int,
        help='concurrent workers (default: ${env} or 1)'.format(env=settings.WORKERS_ENV),
    )
    parser.add_argument('--config', help='JSON document with the same keys as the flags')
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    parser.add_argument('--version', action='version', version=__version__)
    return parser


def load_config(path):
    """
    Returns the config document at `path` as a dict.
    """
    with open(path, encoding='utf-8') as f:
        config = json.load(f)
    if not isinstance(config, dict):
        raise ImproperlyConfigured('The config document should be a JSON object.')
    unknown = set(config) - CONFIG_KEYS
    if unknown:
        raise ImproperlyConfigured(
            'Unknown config keys: {keys}.'.format(keys=', '.join(sorted(unknown)))
        )
    return config


def resolve_options(args):
    """
    Returns the merged options, flags given on the command line win over
    the config document.
    """
    options = load_config(args.config) if args.config else {}
    for key in ('scenario', 'trials', 'seed', 'k', 'n', 'alice', 'bob', 'out', 'format', 'workers'):
        value = getattr(args, key)
        if value is not None:
            options[key] = value
    names = options.get('scenario')
    if isinstance(names, str):
        names = [names]
    if not names:
        raise ImproperlyConfigured('At least one scenario is required.')
    if ALL in names:
        names = [name for name in scenarios.names() if name != 'custom']
    for name in names:
        scenarios.get(name)
    options['scenario'] = names
    if options.get('n') is not None:
        if options['n'] % 3:
            raise ImproperlyConfigured("'n' should be a multiple of 3, got {n}.".format(n=options['n']))
        options['k'] = options['n'] // 3
    options.setdefault('format', CSV)
    if options['format'] not in FORMATS:
        raise ImproperlyConfigured("Unsupported format '{format}'.".format(format=options['format']))
    return options


def scenario_overrides(options):
    overrides = {
        key: options[key]
        for key in ('trials', 'seed', 'k', 'tolerance', 'workers')
        if options.get(key) is not None
    }
    for key in ('alice', 'bob', 'alice_params', 'bob_params', 'score'):
        if options.get(key) is not None:
            overrides[key] = options[key]
    return overrides


def write_report(data, out):
    if out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    with open(out, 'wb') as f:
        f.write(data)


def run_cli(args=None):
    """
    Returns the exit status of one invocation with `args`.
    """
    parser = get_parser()
    try:
        parsed = parser.parse_args(args)
    except SystemExit as e:
        return e.code
    logging.basicConfig(
        level=logging.DEBUG if parsed.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )
    try:
        options = resolve_options(parsed)
    except (WeakOTError, OSError, ValueError) as e:
        return usage_error(parser, str(e))

    overrides = scenario_overrides(options)
    rows = []
    try:
        for name in options['scenario']:
            rows.extend(run_scenario(name, **overrides))
    except WeakOTError as e:
        return usage_error(parser, str(e))

    data = emit_report(rows, options['format'])
    try:
        write_report(data, options.get('out'))
    except OSError as e:
        return usage_error(parser, 'cannot write report: {error}'.format(error=e))
    failed = [row.scenario for row in rows if row.verdict == FAIL]
    if failed:
        logger.warning('Failed: %s', ', '.join(failed))
        return 1
    return 0


def usage_error(parser, message):
    try:
        parser.error(message)
    except SystemExit as e:
        return e.code


def main():
    sys.exit(run_cli())

#! /usr/bin/env python
import os
import subprocess
import sys

import pytest

PYTEST_ARGS = {
    'default': ['tests', '--cov=weak_ot', '--cov-report=term-missing'],
    'fast': ['tests', '-q'],
}

FLAKE8_ARGS = ['weak_ot', 'tests', '--ignore=E501']

# Exact scenarios, quick enough for every commit
SMOKE_SCENARIOS = ['cks-bound-quantities', 'fuchs-vdg', 'theorem1-sweep', 'helstrom-oracle']


sys.path.append(os.path.dirname(__file__))


def exit_on_failure(ret, message=None):
    if ret:
        if message:
            print(message)
        sys.exit(ret)


def flake8_main(args):
    print('Running flake8 code linting')
    ret = subprocess.call(['flake8'] + args)
    print('flake8 failed' if ret else 'flake8 passed')
    return ret


def smoke_main(scenarios):
    from weak_ot.cli import run_cli

    print('Running scenario smoke test')
    args = []
    for name in scenarios:
        args.extend(['--scenario', name])
    ret = run_cli(args + ['--trials', '50'])
    print('smoke test failed' if ret else 'smoke test passed')
    return ret


def pop_flag(flag):
    try:
        sys.argv.remove(flag)
    except ValueError:
        return False
    return True


def is_function(string):
    # `True` if it looks like a test function is included in the string.
    return string.startswith('test_') or '::test_' in string


if __name__ == "__main__":
    run_flake8 = not pop_flag('--nolint')
    run_tests = not pop_flag('--lintonly')
    run_smoke = pop_flag('--smoke')
    style = 'fast' if pop_flag('--fast') else 'default'
    if style == 'fast':
        run_flake8 = False

    if len(sys.argv) > 1:
        pytest_args = sys.argv[1:]
        first_arg = pytest_args[0]
        if first_arg.startswith('-'):
            # `runtests.py [flags]`
            pytest_args = ['tests'] + pytest_args
        elif is_function(first_arg):
            # `runtests.py test_function [flags]`
            pytest_args = ['tests', '-k', first_arg.split('::')[-1]] + pytest_args[1:]
    else:
        pytest_args = PYTEST_ARGS[style]

    if run_tests:
        exit_on_failure(pytest.main(pytest_args))
    if run_smoke:
        exit_on_failure(smoke_main(SMOKE_SCENARIOS), 'A scenario reported FAIL.')
    if run_flake8:
        exit_on_failure(flake8_main(FLAKE8_ARGS))

"""
Global numeric tolerances and run defaults.

Values may be overridden by assigning to the module attributes before any
computation runs, e.g. ``weak_ot.settings.ATOL = 1e-8``. Only the default
worker count is read from the environment.
"""
import os

WORKERS_ENV = 'WEAK_OT_WORKERS'

# Hermiticity, normalization and completeness checks
ATOL = 1e-9

# Claims that hold exactly in exact arithmetic
EXACT_ATOL = 1e-12

# Equality of Alice's views for the reliability theorem
THEOREM_ATOL = 1e-10

# Two-sided level of the Wilson interval and the verdict tolerance
CONFIDENCE = 0.99

DEFAULT_SEED = 7


def get_default_workers():
    """
    Returns the worker count from the environment or 1.
    """
    value = os.environ.get(WORKERS_ENV, '')
    try:
        workers = int(value)
    except ValueError:
        return 1
    return max(workers, 1)


DEFAULT_WORKERS = get_default_workers()

from weak_ot.testing import registry, rng  # noqa: F401

"""Gap shifted boundary method for Poisson and linear elasticity on embedded domains."""

from ._gapsbm import *  # noqa: F401,F403
from ._gapsbm import __doc__  # noqa: F401


def run(case_name, variant="antisym", levels=5, rotations=None, kappa=True, threads=1):
    """Convergence sweep with the same defaults as the command-line driver."""
    config = StudyConfig()  # noqa: F405
    config.case_name = case_name
    config.variant = parse_variant(variant) if isinstance(variant, str) else variant  # noqa: F405
    config.levels = levels
    if rotations is not None:
        config.rotations_deg = list(rotations)
    config.compute_kappa = kappa
    config.threads = threads
    return run_convergence(config)  # noqa: F405

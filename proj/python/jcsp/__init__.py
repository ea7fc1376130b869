"""Decision procedure for CSPs over CD(3) algebras."""

from ._core import (
    Algebra,
    Instance,
    JcspError,
    brute_force,
    dd2,
    gen_algebra,
    gen_instance,
    k_minimalize,
    maj2,
    run_suite,
    solve,
    suite_names,
)

__all__ = [
    "Algebra",
    "Instance",
    "JcspError",
    "brute_force",
    "dd2",
    "gen_algebra",
    "gen_instance",
    "k_minimalize",
    "maj2",
    "run_suite",
    "solve",
    "suite_names",
]

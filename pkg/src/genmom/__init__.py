"""Generalized momentum methods from a Hamiltonian viewpoint.

Modules
-------
spaces
    Normed spaces, mirror maps, Bregman divergences.
objectives
    Test objectives and problem instances.
schedules
    Step-size schedules ``a_k, A_k, H_k, B_k``.
methods
    Discrete methods ``gmd_f``, ``gmd``, ``gmd_b`` and the run loop.
dynamics
    Continuous-time dynamics and their conserved quantities.
diagnostics
    Traces, conserved/bounded quantities, bound checks, rate fits.
harness
    Configuration, CSV output, sweeps, invariant checks and the CLI.
"""

__version__ = "0.1.0"

"""Speed-limit bounds for quantum lattice dynamics, certified against exact
dense simulation.

The package has four computational layers:

* :mod:`lrbounds.graphs` - interaction graphs, the hop metric, and exact
  enumeration of the (optionally self-avoiding) edge paths behind the
  path-sum bounds;
* :mod:`lrbounds.bounds` / :mod:`lrbounds.curves` - every closed-form bound
  family as a pure function, plus light-cone velocity extraction from bound
  surfaces;
* :mod:`lrbounds.exact` - dense simulation of small qubit systems: Heisenberg
  evolution, operator norms and projectors, locality error measurements, and
  state-preparation protocols;
* :mod:`lrbounds.walk` / :mod:`lrbounds.circuit` - the single-particle hopping
  walk (Bessel closed form against direct integration) and classical
  Pauli-support spreading in brickwork random circuits.

:mod:`lrbounds.runner` ties these into reproducible, manifest-stamped
experiment runs; the ``lrbounds`` CLI drives it.
"""

__version__ = "0.1.0"

from . import bounds, circuit, curves, exact, graphs, walk
from .bounds import (bounded_degree_bound, butterfly_velocity_1d,
                     butterfly_velocity_general, chain_bound,
                     factorial_to_exponential, exp_envelope, matrix_exp_bound,
                     path_sum_bound, qw_markov_bound, single_particle_bound)
from .curves import (BoundCurve, LightConeReport, complete_graph_bound_curve,
                     evaluate_family, first_crossing, light_cone_fit)
from .errors import FitError, NumericError, ResourceLimitError
from .graphs import (InteractionGraph, PathTally, complete_graph, cycle_graph,
                     enumerate_paths, grid_graph, path_graph)
from .walk import WalkState, bessel_j_array, walk_bound_gap, walk_exact, walk_ode

__all__ = [name for name in dir() if not name.startswith("_")]

"""Concavity diagnostics for Gaussian measures of convex bodies.

Subpackages by responsibility:

- ``specfun``      scalar Gaussian kernels g_p, truncated moments J_p and
                   their inverses, the one-dimensional CDF pair psi/phi.
- ``cylinder``     round-cylinder profile functions (perimeter, concavity
                   power), the candidate concavifying transforms, and the
                   argmin partition of the measure axis.
- ``body``         support-function descriptions of the body catalog and
                   Minkowski interpolation between them.
- ``gaussmoments`` Gaussian measure and polynomial moments of bodies via
                   polar quadrature plus a Monte Carlo cross-check.
- ``torsion``      Gaussian torsional rigidity: exact radial/half-space
                   solvers, variational bounds, 1-d symmetrization.
- ``verify``       the inequality checks: concavity along Minkowski
                   interpolations, the main lower bound on the concavity
                   power, Poincare/moment/rearrangement inequalities, and
                   counterexample searches.
- ``cli``          command-line front end emitting CSV/JSON/SVG.
"""

from __future__ import annotations

__version__ = "0.1.0"

__all__ = ["__version__"]

"""Spectral analysis of Koopman operators from trajectory data."""

from ._errors import (
    BasisDegenerate, DivergenceError, InvalidArgument, InvalidData, KoopspecError,
    NotPositiveDefinite, NumericalFailure, ParseError,
)
from ._kernels import BACKEND
from .cd_kernel import (
    CDEvaluator, GridFunction, atom_estimate, build_evaluator, f_zeta, trig_eval,
    uniform_grid, zeta,
)
from .dynamics import (
    CAT_MOMENTS, CAT_OBSERVABLES, CatMapState, LorenzState, cat_map_orbit, cat_map_step,
    cat_map_trajectory, fourier_observable, load_trajectory, lorenz_field, lorenz_states,
    lorenz_trajectory, parse_trajectory, random_cat_state, random_lorenz_state,
    write_trajectory,
)
from .moments import (
    AtomList, MomentSequence, PiecewiseDensity, Trajectory, ac_moments, atomic_moments,
    cantor_moments, combine, estimate_moments, modify,
)
from .orthopoly import (
    MonicPolynomial, PolynomialBasis, SpectrumEstimate, companion_roots,
    finite_section_matrix, hankel_dmd, monic_orthogonal, orthonormal_basis, poly_roots,
)
from .projections import (
    Interval, Partition, ProjectionCoefficients, Singleton, apply_operator_approx,
    apply_projection, build_partition, detect_atoms, indicator_approx, interval_coeffs,
    operator_coefficients, singleton_coeffs,
)
from .toeplitz import (
    HermitianToeplitz, levinson_solve, szego_recursion, toeplitz_cholesky, trench_inverse,
)
from .weak_approx import (
    QuadratureMeasure, SingularityIndicator, cesaro_cdf, cesaro_coefficients,
    cesaro_density, quadrature, quadrature_cdf, singularity_indicator,
)

__version__ = "0.1.0"

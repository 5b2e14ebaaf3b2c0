"""Complex genuine alpha-Bernstein-Durrmeyer operators on compact disks."""

from .analysis import (
    ConvergenceRecord,
    OrderEstimate,
    estimate_order,
    measure,
    sup_norm_on_circle,
    upper_bound_constant,
    verify_simultaneous,
    verify_upper_bound,
    voronovskaja_residual,
)
from .basis import alpha_basis_poly, bernstein_poly
from .exact import Poly, binomial
from .moments import (
    MomentTable,
    monomial_image_closed,
    monomial_image_direct,
    monomial_image_recurrence,
)
from .operator import (
    DiskSpec,
    apply_analytic,
    apply_quadrature,
    contour_derivative,
    operator_derivative,
)
from .series import AnalyticSeries, TruncationPolicy, builtin, standard_test_set

__version__ = "0.1.0"

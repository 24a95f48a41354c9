"""Planar isoperimetric-deficit and asymmetry toolkit.

Shape classes with exact primitive measures, the deficit and the two disk
asymmetries, explicit extremal families (stadium, dumbbell, a disconnected
two-disk family), symmetric decreasing rearrangement, the linearized
near-disk minimization solved by two independent routes, and the curvature
first-order condition for the convex minimizer.
"""

from .families import (
    ProjectionFailedError,
    ScanRecord,
    dumbbell_report,
    dumbbell_shape,
    fuglede_counterexample,
    nearly_spherical,
    scan,
    stadium_profile,
)
from .functionals import (
    FunctionalsReport,
    barycentric_asymmetry,
    deficit,
    fraenkel_asymmetry,
    functionals_report,
    symmetric_difference_with_disk,
    two_ball_l1_distance,
)
from .geometry import (
    DegenerateShapeError,
    DiskSegmentComposite,
    Point2,
    Polygon,
    RadialShape,
    Shape,
    ShapeError,
    ShapeValidationError,
    Stadium,
    area,
    barycenter,
    diameter,
    hausdorff_distance,
    load_shape,
    normalize,
    perimeter_epsilon_estimate,
    perimeter_minkowski,
    save_shape,
)
from .optimality import (
    CirclePartition,
    OptimalityReport,
    circle_partition,
    eqop1_root,
    eqop2_root,
    optimality_residual,
)
from .rearrangement import SampledFunction, decreasing_rearrangement, riesz_pair
from .variational import (
    FourierProfile,
    J_full,
    VariationalSolution,
    barrier_M,
    barrier_M_star,
    barrier_inner_integral,
    green_kernel,
    kernel_H,
    m_lower_bound,
    opepl_rayleigh,
    opepl_solve_fixedpoint,
    opepl_solve_fourier,
    solve_ode_periodic,
)

__version__ = "0.1.0"

"""p-minimal surface geometry in the Heisenberg group H1 and the standard
pseudohermitian 3-sphere: pointwise curvature quantities, characteristic
curve tracing, singular-set classification, closed-form solution families,
a regularized Dirichlet solver, variational checks, and sphere utilities.
"""

from .errors import (AmbiguousTangentError, AtPoleError, BadParamsError,
                     InvalidPairError, NotMinimalError, NotOnSingularCurveError,
                     NotOnSphereError, NotSingularError, OutOfDomainError,
                     PMinSurfError, RankFullError, SingularError,
                     SingularInDomainError, StartSingularError,
                     SupportViolationError, UnstableWindingError,
                     VerticalRulingError)
from .fields import (AnalyticField, CombinedField, Field2, GridField,
                     constant_field, field_eval, read_grid_csv, rotated_field,
                     write_grid_csv)
from .heisenberg import Frame3, group_inverse, group_multiply, left_frame, theta0_eval
from .curvature import (Domain2, FirstOrderData, first_order_data, p_area,
                        p_mean_curvature, pmge_numerator, singular_tolerance,
                        tangential_sublaplacian_check)

__version__ = "0.1.0"

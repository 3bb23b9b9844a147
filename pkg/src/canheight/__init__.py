"""Certified canonical heights for the maps z^d + c over the rationals."""

from .bounds import (BoundProfile, BoundViolation, PreperiodicWithinN, SatisfiesBound, integer_c_lower_bound,
                     remark_bound_general_d, theorem2_constants, theorem2_lower_bound, type_ii_count, verify_point)
from .dynamics import (BasinEscape, BasinStatus, MapParams, NonIntegral, Preperiodic, TypeIObstruction, Undecided,
                       Wandering, basin_test, decide_preperiodic, orbit, step)
from .errors import (BoundViolationError, CanHeightError, DomainError, InconclusiveError, ResourceError,
                     UnfactoredCofactorError)
from .families import (FixedFamily, NoneMatch, PreperiodicCatalog, TwoCycleFamily, classify_integer_preperiodic,
                       family_fixed, family_two_cycle)
from .height import ExactSchedule, HeightReport, PlaceSum, canonical_height, height_decomposition, m_for_precision
from .intervals import CertInterval
from .local import (Exact, LocalHeight, ReductionType, TailBounded, classify_reduction, local_height,
                    local_height_arch, local_height_nonarch)
from .numerics import (ARCHIMEDEAN, Place, Rational, abs_p, denominator_support, naive_height, naive_local_height,
                       parse_rational, val)
from .survey import SurveyRow, enumerate_rationals, family_ratio_scan, figure1_dataset, min_wandering_height

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

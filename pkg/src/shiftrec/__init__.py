"""Recurrence-set dimensions on shift spaces: languages, pressure, Bowen
roots and explicit Moran constructions."""

from .errors import (AdmissibilityViolation, BudgetExceeded, ConfigError,
                     EmptyLevel, HypothesisViolated, NonExtendableWord,
                     PrecisionExhausted)
from .families import (LANGUAGE, EndsWith, StartsAndEndsWith, StartsWith,
                       WordFamily, family_from_name)
from .recurrence import (PsiFunction, cover_sum_audit, dimension_R_f,
                         dimension_R_psi, recurrence_exponent)
from .shifts import (BetaShift, ForbiddenWordsShift, FullShift, SGapShift,
                     golden_mean_shift, quasi_greedy_expansion, shift_from_config)
from .thermo import (Potential, birkhoff_inf, birkhoff_sup, bowen_root,
                     entropy_estimate, partition_sum, solve_sn)
from .words import (common_prefix_length, edit_ball_count, edit_distance,
                    parse_word, shift_metric)

__version__ = "0.1.0"

"""Cesaro-weighted Hardy-Littlewood sums and their explicit formula."""
from .errors import (ConfigError, DataError, DomainError, EvaluationError, HLError, InvalidArgument,
                     MethodFailure, OutOfRange, PoleError)
from .formula import (TermBreakdown, TermValue, TruncationConfig, VerificationReport, bessel_double_sum,
                      bessel_ell_sum, evaluate_rhs, main_terms, verify, zero_sum_primary,
                      zero_sum_secondary)
from .sieve import (CesaroQuery, MangoldtTable, Normalization, cesaro_lhs, r_hl, r_hl_bruteforce,
                    sieve_von_mangoldt)
from .zeros import ZeroList, load_zeros, parse_zeros

__version__ = "0.1.0"

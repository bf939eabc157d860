"""Partial composite cyclotomic Fourier transforms over GF(2^m) and an
errors-and-erasures Reed-Solomon decoder built on them."""

from .cfft import (BilinearNetwork, build_dcfft, build_scfft,
                   cyclotomic_cosets, eval_network, naive_dft)
from .cost import (CostReport, best_factorization, count, cse,
                   horner_baseline, report_table)
from .errors import (BadFactorization, CcftError, DimensionMismatch,
                     DivisionByZero, InconsistentPair, InvalidLength,
                     LengthMismatch, NonPrimitivePolynomial,
                     OrderUnavailable, PrecisionViolation,
                     UnsupportedLength)
from .gf import FieldContext, element_of_order, make_field, normal_basis
from .planner import (DCFFT, SCFFT, PrunedPlan, TransformPlan, eval_plan,
                      eval_pruned, load_plan, plan, plan_from_dict,
                      plan_to_dict, prune, save_plan)
from .rs import (DecodeResult, Polys, RSCodeSpec, chien_forney, decode,
                 encode, header_dict, horner_chien_forney,
                 horner_syndromes, key_equation,
                 make_code, read_symbols, syndromes, write_symbols)

__version__ = "0.1.0"

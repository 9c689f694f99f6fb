"""Permutation decoding of first-order Generalized Reed-Muller codes."""

__version__ = "0.1.0"

from .fields import FieldCtx, FieldElement, SubField, build_field, subfield_embed, trace
from .grm_code import (GrmCode, build_code, check_map_phi, defining_set, encode,
                       eval_code_oracle, extend, min_distance_bruteforce, puncture,
                       q_weight)
from .infoset import (Decomposition, InfoSet, build_infoset, divisibility_check,
                      find_decompositions, mult_order, verify_infoset)
from .permdec import (PermDecoder, PermSpec, apply_perm, find_mu, pd_enumeration_order,
                      s_pd_bound, standard_form, syndrome_test, verify_pd_like)
from .analysis import (BoundsRow, ProbResult, bounds_row, emit_tables, prob_exact,
                       prob_montecarlo, prop51_check)
from .exceptions import CapExceeded, DecodeFailure, InfoSetError

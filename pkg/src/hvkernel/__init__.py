"""Exact computations for the twisted and mirror Heisenberg-Virasoro algebras."""

from .algebra import (AlgebraKind, Generator, LieElement, Subalgebra, C1, C2, C3, bracket,
                      bracket_lin, d, format_rational, generators_up_to, h, jacobi_defect,
                      jacobi_sweep, parse_generator, parse_rational)
from .errors import (BoundExceeded, HVError, HypothesisViolated, InconsistentCharacter,
                     InvalidGenerator, KindMismatch, NonRestrictedVector, WindowExceeded,
                     ZeroLambda, ZeroLevel, ZeroVector)
from .linalg import kernel
from .modules import (Vec, act, build_character_induced, build_fock, build_highest_weight,
                      build_induced, build_laurent_module, build_poly_module,
                      build_semi_whittaker, build_tensor, build_verma_vir, vir_trivial_extend)
from .moduledoc import build_from_doc
from .pbw import (EnvElement, ExpVec, FORMULAS, cmp_pair, cmp_pair_prime, cmp_revlex,
                  formula_suite, normal_form, verify_formula)
from .probes import (annihilator, check_degree_lemma, deg, deg_prime, injectivity_probe,
                     invariant, local_nilpotency_probe)
from .reports import VerificationReport
from .sugawara import (appendix_decomposition_check, d_prime, sugawara_L, sugawara_Lbar,
                       sugawara_dress, verify_sugawara_relations)

__version__ = "0.1.0"

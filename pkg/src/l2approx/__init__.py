"""Exact rank functions, twisted homology dimensions, and finite-quotient
approximation experiments for groups inside products of SL2."""

from .exactalg import (ExactMatrix, FieldElement, NumberField, QQ, Rational,
                       companion_embed, rank_exact)
from .groupcore import (GroupAlgebraElement, GroupAlgebraMatrix, GroupPresentation,
                        IDENTITY_WORD, Word, evaluate, free_reduce, word_from_string)
from .repweights import (ParityError, RepAssignment, WeightVector,
                         central_character_value, sym_power, weight_dim, weight_rep)
from .foxhomology import (HomologyReport, boundary_stack, fox_derivative, fox_jacobian,
                          homology_dims, invariants_dim, presentation_complex)
from .rankfun import (FiniteAlgebraMatrix, FiniteQuotientMap, RankValue,
                      characters_of_cyclic, cyclotomic_field, finite_vn_rank,
                      luck_rank, luck_sequence, sylvester_rank, twisted_finite_rank)
from .padicharris import (CongruenceQuotient, HarrisRow, congruence_quotient,
                          harris_sequence)
from .limitlab import (ConvergenceReport, WeightSchedule, betti_estimate,
                       convergence_fit, weight_schedule)
from .census import CensusEntry, builtin_catalog, builtin_entry, load_entry

__version__ = "0.1.0"

"""greedylab: a numerical laboratory for greedy-like bases.

Builds rearrangement-invariant sequence norms, block-partition projections,
rotation-perturbed and composite bases with prescribed conditionality
growth, and measures greedy-approximation parameters on them.
"""

from .seqspace import (FundamentalFunction, SeqNorm, Weight, dini_ratio,
                       embedding_constant, fundamental_function, has_lrp,
                       has_urp, lorentz_equiv_check, norm_eval)
from .partition import (BlockSystem, OrderedPartition, average_project,
                        block_functional, complement_project,
                        projection_norm_bound_check)
from .basis import (Basis, DirectSumSpace, GreedyResult, MappedSpace,
                    NormedSpace, SeqSpace, affinity, analyze,
                    cc_block_sequence, coordinate_projection, direct_sum,
                    greedy_set, tga)
from .constructions import (DkkSpace, DkkwAssembly, EtaSequence, ResourceLimitError,
                            RotationPair, build_dem_nonucc, build_mainA,
                            build_thmA, dkk_space, dkkw_assembly,
                            eq_positive_check, eta_transform, rotation_pair)
from .estimators import (EstimateReport, WitnessFamily, democracy_functions,
                         dyadic_layers, family_from_basis, km_exact_hilbert,
                         km_lower, kmphi_transfer_check, ktilde_lower,
                         lebesgue_lower, phi_lower, quasi_greedy_lower,
                         tqg_constant_lower)

__version__ = "0.1.0"

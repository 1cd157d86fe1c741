"""Network alignment through phase estimation on Kronecker walk operators.

The pipeline reads undirected networks, builds their column-stochastic
Kronecker operator, simulates phase estimation on it (or on its closest
Hermitian part), collapses the post-measurement state register by register
and greedily reads off node alignments. A classical power-iteration
baseline runs through the same matching code.
"""

from .errors import (ConvergenceError, DegenerateConditionError, ParseError, QIsoRankError,
                     SizeError, ValidationError)
from .isorank import (SimilarityVector, baseline_alignment, eq1_residual, isorank_similarity,
                      similarity_tables)
from .linalg import (EigenSystem, eig_oracle, expm_hermitian, kron, power_iteration,
                     principal_eigenvector)
from .matching import (Alignment, MatchConfig, edge_correctness, match_multiway,
                       match_pairwise)
from .measure import (ConditionalTable, collapse, grouped_collapse, marginal_distribution,
                      sample_counts, sampled_tables, total_variation)
from .netio import (Network, connected_components, from_edges, neighbors, parse_edge_list,
                    read_edge_list)
from .operators import (HermitianModel, SimilarityOperator, StochasticOperator,
                        attach_scores, column_normalize, hermitian_decompose, kron_chain,
                        normality_report, phase_map, stochastic_operator)
from .pea import (PeaOutcome, QuantumState, RegisterLayout, equal_superposition,
                  recovered_eigenvector, run_pea, success_probability)
from .pipeline import AlignmentRun, align_networks, build_model

__version__ = "0.1.0"

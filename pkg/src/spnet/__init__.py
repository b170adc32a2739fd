"""Activity-network analysis: makespans, series-parallel extensions,
slowdown bounds, and exact verification of slowdown conjectures."""

from .errors import (CycleError, DuplicateActivity, ExpressionSyntaxError,
                     IdOutOfRange, MalformedInputError, MissingDuration,
                     NotAnExtension, NotAntichain, NotSeriesParallel,
                     OverlappingActivities, SizeLimitExceeded,
                     SlowdownBoundViolation, SpecTooNarrow, SpnetError,
                     TripleNotFound)
from .network import (ActivityNetwork, Workload, canonical_form,
                      critical_path, depth, dual, from_closure, from_edges,
                      is_antichain, is_chain, is_extension, makespan,
                      maximal_chains, slowdown, transitive_reduction, width)
from .spalgebra import (Atom, Classification, Parallel, Series, SpExpr,
                        classify, expr_makespan, expr_to_network,
                        find_n_witness, is_series_parallel,
                        modular_decomposition, parallel_compose,
                        parse_sp_expr, render_sp_expr, series_compose,
                        sp_decompose)
from .extensions import (NsSpec, all_sp_extensions, incomparable_pairs,
                         lc_extension, level, levels,
                         minimal_decomposable_extensions,
                         minimal_sp_extensions, ns_network,
                         random_sp_extension)
from .slowdown import (SlowdownReport, adversarial_workload, adversary_report,
                       disprove_factor_two, extension_report,
                       find_forced_chain_triple, heavy_ns_workload,
                       lc_slowdown_report, rho)
from .feasibility import (FeasibilityResult, Inequality, InequalitySystem,
                          fm_feasible)
from .conjecture import (CandidateResult, CheckReport, build_systems,
                         candidate_networks, check_candidate,
                         check_conjecture, enumerate_posets,
                         verify_counterexample)
from .msp import (MspSolution, factor_43_sweep, msp_branch_and_bound,
                  msp_brute, msp_lc, random_workload)
from .serialize import (format_rational, network_from_doc, network_to_doc,
                        parse_rational, to_dot)

__version__ = "0.1.0"

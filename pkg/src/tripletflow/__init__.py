"""Boundary triplets, self-adjoint extensions and circle-family indices on
exact finite-dimensional and one-dimensional models."""

from .relspace import (DEFAULT_TOL, LinearRelation, Subspace,
                       adjoint_relation, cayley_unitary, is_self_adjoint,
                       map_relation, parts_decomposition, restrict_relation,
                       relation_from_json, relation_to_json,
                       span_orthonormalize)
from .gelfand import (GelfandTriple, build_triple, dual_pairing,
                      identity_triple, is_triple_self_adjoint,
                      primal_pairing, shift_identity_residual, triple_adjoint)
from .cayley import (SymmetricModel, cayley_factorization_check,
                     deficiency_spaces, extension_from_relation,
                     extension_isometry, lagrange_residual, partial_cayley,
                     random_selfadjoint_relation, random_symmetric_model,
                     von_neumann_components)
from .triplet import (MatrixBoundaryProblem, ReducedTriplet, compare_triplets,
                      dirichlet_to_neumann, kernel_report,
                      kernel_solution_map, neumann_graph_check,
                      reduced_residuals, reduced_triplet,
                      regular_kernel_split, transform_boundary_condition)
from .sturm import (ExpPoly, RellichBoundaryProblem, deficiency_basis,
                    dirichlet_solve, galerkin_sine, kappa_of_theta,
                    rellich_dtn_matrix, robin_relation, secular_eigenvalues)
from .famindex import (CONVENTION, FamilyLoop, IndexReport, branch_table,
                       det_winding, relation_family_index, robin_index_report,
                       spectral_flow, verify_index_theorem)
from .symbols import (SymbolPoint, calderon_symbol, dirac_unitary,
                      matrix_sign, mixing_map, spectral_split,
                      split_form_lagrangian_gap, split_winding_report,
                      transversality_check)

__version__ = "0.1.0"

"""Computational workbench for Turán-type problems on uniform hypergraphs."""

from .hypercore import (DegreeProfile, HypergraphError, Partition, RGraph, blowup, complete_graph,
                        degree_profile, duplicate_vertex, find_homomorphism, find_r_partition, induced,
                        is_2_covered, is_isomorphic, is_partial_steiner, is_r_partite, link, parse_hg,
                        format_hg, read_hg, remove_vertex, shadow, write_hg)
from .families import (PatternKind, TrianglePattern, delta_family, find_triangle, gen_T, is_free,
                       is_T_free_via_hom)
from .lagrangian import (MaximizeConfig, OptResult, ScaleGuardError, SimplexVector, check_opt_structure,
                         eval_P, grad_P, hess_P, kkt_check, lagrangian, maximize)
from .entropy import build_distribution, entropy, entropy_gap, marginal
from .extremal import (ex_search, gen_affine_plane, gen_fano, gen_turan, symmetrize_decompose)

__version__ = "0.1.0"

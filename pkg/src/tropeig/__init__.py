"""Tropical eigenvalues of matrix polynomials and first-order eigenvalue asymptotics."""

from .assignment import DiGraph, HungarianResult, max_assignment, min_assignment, opt_graph, sat_graph
from .complex_numerics import CMatrixPoly, CPoly, RootSet, det_poly, matrix_poly_eigs, poly_roots
from .errors import *  # noqa: F401,F403
from .harness import MatchReport, SampledSpectrum, estimate_exponents, random_instance, sample_eigenvalues, verify
from .puiseux_asymptotics import (
    AsymptoticMatrixPoly,
    AsymptoticPoly,
    EigenAsymptotics,
    auxiliary_pencil,
    build_Gk,
    matrix_eigen_asymptotics,
    restrict_matrix,
    sat_opt_equivalence,
    scalar_root_asymptotics,
)
from .tropical_core import INF, NewtonPolygon, RootList, TropPoly, eval_poly, newton_polygon, trop_roots, weak_majorization
from .tropical_spectra import (
    CharPolyFunction,
    TropEigList,
    TropMatrixPoly,
    char_function,
    critical_graph,
    deg_permanent,
    eval_char,
    min_circuit_mean,
    term_rank,
    trop_matrix_eigenvalues,
    val_permanent,
)

__version__ = "0.1.0"

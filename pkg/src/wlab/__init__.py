"""Branched minimal surfaces from Weierstrass data, their Hopf differentials,
the laws for descending to a Moebius band, and flat-cylinder Steklov spectra."""

from .annulus import (AnnulusAutomorphism, AnnulusClass, HopfFitResult, apply_automorphism,
                      classify_annulus, fit_c0)
from .catalog import CatalogEntry, DirectChartSurface, catalog_get, catalog_list
from .checks import (DEFAULT_TOLERANCES, BranchExpansion, CheckReport, branch_expansion,
                     check_free_boundary, check_hopf_real_on_boundary, check_minimal_immersion,
                     fd_hopf_oracle)
from .errors import NumericalError, UsageError, WlabError
from .moebius import (DeckMap, ImpossibilityCertificate, check_deck_invariance, check_f_law,
                      check_gauss_law, deck, hopf_law_residual, impossibility_certificate)
from .rational import ComplexPoly, RationalComplexFunction, poly_roots, rf_derivative, rf_eval, rf_simplify
from .steklov import (CylinderGeometry, SteklovSpectrum, dtn_mode_matrix, moebius_spectrum,
                      multiplicity_report, normalized_eigenvalue, steklov_spectrum)
from .weierstrass import (Domain, PathInPlane, QuadDiffForm, Segment, WeierstrassSurface,
                          branch_points, conformal_factor, gauss_map, hopf_coefficient, immerse,
                          period_residual, second_fundamental_form)

__version__ = "0.1.0"

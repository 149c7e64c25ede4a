"""Stable subspaces of bistochastic maps of matrix algebras.

Compute the isometric-sweeping decomposition of a bistochastic map,
classify its stable JB*-subalgebra, run refutation-only positivity
batteries, and build entanglement witnesses together with the PPT
entangled states they detect.
"""
from .matcore import (DEFAULT_TOL, HermitianEig, VerificationError, hermitian_eig,
                      hs_inner, hs_norm, is_psd, jordan_product, matrix_unit,
                      partial_transpose, rank_one, schur_psd_check,
                      spectral_projections, tensor)
from .supermaps import (PositivityVerdict, SuperOperator, adjoint, apply,
                        choi_matrix, compose, hs_contraction_check,
                        is_bistochastic, is_completely_copositive,
                        is_completely_positive, k_positivity_probe,
                        kadison_schwarz_defect, positivity_probe, power)
from .stable import (ClassificationEvidence, DecompositionReport, HSSubspace,
                     JordanClass, Prop1Report, classification_evidence,
                     classify_jordan_subalgebra, compute_stable_subspace,
                     conditional_expectation, decompose, verify_prop1)
from .witnesses import (DetectionCertificate, Witness, build_witness,
                        construct_detected_state, detected_ppt_state, evaluate,
                        is_ppt, negative_eigenspace)
from . import kernels, zoo

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL", "HermitianEig", "VerificationError", "hermitian_eig",
    "hs_inner", "hs_norm", "is_psd", "jordan_product", "matrix_unit",
    "partial_transpose", "rank_one", "schur_psd_check", "spectral_projections",
    "tensor",
    "PositivityVerdict", "SuperOperator", "adjoint", "apply", "choi_matrix",
    "compose", "hs_contraction_check", "is_bistochastic",
    "is_completely_copositive", "is_completely_positive", "k_positivity_probe",
    "kadison_schwarz_defect", "positivity_probe", "power",
    "ClassificationEvidence", "DecompositionReport", "HSSubspace", "JordanClass",
    "Prop1Report", "classification_evidence", "classify_jordan_subalgebra",
    "compute_stable_subspace", "conditional_expectation", "decompose",
    "verify_prop1",
    "DetectionCertificate", "Witness", "build_witness",
    "construct_detected_state", "detected_ppt_state", "evaluate", "is_ppt",
    "negative_eigenspace",
    "kernels", "zoo",
]

"""
Relations package - the verification suite.

One check per named statement: exact finite-L identities produce
RelationReports, asymptotic statements produce ScalingReports over an L grid.
"""

from .bounds import check_moment_bounds
from .immse import (
    check_alpha_immse,
    check_canonical_immse,
    check_log_identity,
    check_side_channel_immse,
    check_snr_immse,
)
from .lemmas import check_lemma_mmse_relation, check_mmse_variation, concentration_scan
from .nishimori import check_sub_measurement_ibp, nishimori_suite
from .path_checks import check_closed_form_scaling, check_dt_derivative, check_path_reconstruction
from .reports import build_relation_report, build_scaling_report

__all__ = [
    "check_moment_bounds",
    "check_alpha_immse",
    "check_canonical_immse",
    "check_log_identity",
    "check_side_channel_immse",
    "check_snr_immse",
    "check_lemma_mmse_relation",
    "check_mmse_variation",
    "concentration_scan",
    "check_sub_measurement_ibp",
    "nishimori_suite",
    "check_closed_form_scaling",
    "check_dt_derivative",
    "check_path_reconstruction",
    "build_relation_report",
    "build_scaling_report",
]

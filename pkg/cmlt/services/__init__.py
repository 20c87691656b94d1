"""Services module."""
from cmlt.services.gaussian_service import gaussian_service
from cmlt.services.eisenstein_service import eisenstein_service
from cmlt.services.frobenius_service import frobenius_service
from cmlt.services.residue_service import residue_service
from cmlt.services.constant_service import constant_service
from cmlt.services.classifier_service import classifier_service
from cmlt.services.trace_count_service import trace_count_service
from cmlt.services.verification_service import verification_service

__all__ = [
    "gaussian_service",
    "eisenstein_service",
    "frobenius_service",
    "residue_service",
    "constant_service",
    "classifier_service",
    "trace_count_service",
    "verification_service",
]

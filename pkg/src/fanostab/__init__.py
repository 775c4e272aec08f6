"""Cohomology of twisted forms on Grassmannians and their sections and covers,
special-cohomology certificates, checked diagram chases, and stability
verdicts for tangent bundles of Fano manifolds."""

from .special import SpecialCohomologyCertificate, base_certificate, certificate_chain, propagate_cyclic, propagate_section
from .stability import FanoProfile, Outcome, StabilityVerdict, fano_stability
from .tables import CohomologyTable, SpaceDescriptor, grassmannian, projective_space, weyl_table

__version__ = "0.1.0"

__all__ = [
    "CohomologyTable",
    "FanoProfile",
    "Outcome",
    "SpaceDescriptor",
    "SpecialCohomologyCertificate",
    "StabilityVerdict",
    "base_certificate",
    "certificate_chain",
    "fano_stability",
    "grassmannian",
    "projective_space",
    "propagate_cyclic",
    "propagate_section",
    "weyl_table",
]

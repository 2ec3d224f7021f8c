"""Exact non-reachability certificates for the orbit problem A^n X = Y."""
from .certificate import Certificate, Inconclusive, ReachableWitness
from .certify import CertifyConfig, bounded_reach_search, certify, certify_all
from .instance import OrbitInstance, load_instance
from .oracle import VerificationReport, orbit_prefix, verify_certificate
from .predicate import eval_predicate
from .ratmat import Matrix, Vector
from .spectral import spectrum

__all__ = [
    "Certificate", "CertifyConfig", "Inconclusive", "Matrix", "OrbitInstance", "ReachableWitness",
    "VerificationReport", "Vector", "bounded_reach_search", "certify", "certify_all", "eval_predicate",
    "load_instance", "orbit_prefix", "spectrum", "verify_certificate",
]

"""Numerical laboratory for bounded symmetric domains, Calabi's diastasis,
entropy and first-eigenvalue bounds."""

from .domains import Domain, DomainError, Family, ParseError, parse_domain
from .jordan import DomainInvariants, domain_invariants

__all__ = ["Domain", "DomainError", "DomainInvariants", "Family", "ParseError", "domain_invariants", "parse_domain"]

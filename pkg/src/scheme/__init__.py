"""Fifth-order well-balanced A-WENO spatial discretization."""

from src.scheme.rhs import (
    SchemeDiagnostics, SemiDiscretization1D, SemiDiscretization2D, semidiscrete_rhs,
)
from src.scheme.variants import SchemeOptions, SchemeVariant

__all__ = [
    'SchemeDiagnostics', 'SchemeOptions', 'SchemeVariant',
    'SemiDiscretization1D', 'SemiDiscretization2D', 'semidiscrete_rhs',
]

"""Fifth-order running integrals used by the global equilibrium variables."""

from src.quadrature.ladders import RunningIntegrals, running_integrals

__all__ = ['RunningIntegrals', 'running_integrals']

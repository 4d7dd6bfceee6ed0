"""
Scheme variants and numerical options.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from src.errors import ConfigurationError


class SchemeVariant(str, Enum):
    """
    LCD_EQUILIBRIUM: LCD of equilibrium variables with the eigenvectors of C
    PLAIN_EQUILIBRIUM: Componentwise interpolation of equilibrium variables
    LCD_CONSERVATIVE: LCD of conservative variables, not well-balanced
    LCD_EQUILIBRIUM_VIA_A: LCD of equilibrium variables with the eigenvectors
        of dF/dU - B
    """

    LCD_EQUILIBRIUM = '1'
    PLAIN_EQUILIBRIUM = '2'
    LCD_CONSERVATIVE = '3'
    LCD_EQUILIBRIUM_VIA_A = 'A'

    @classmethod
    def parse(cls, value: Union[str, int, 'SchemeVariant']) -> 'SchemeVariant':
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            valid = [variant.value for variant in cls]
            raise ConfigurationError(f"Invalid scheme: {value}. Must be one of {valid}")

    @property
    def well_balanced(self) -> bool:
        return self != SchemeVariant.LCD_CONSERVATIVE

    @property
    def label(self) -> str:
        return f"scheme{self.value}"


RECONSTRUCTIONS = ('weno', 'linear', 'constant')


@dataclass(frozen=True)
class SchemeOptions:
    """
    Attributes:
        variant: Interface state construction
        reconstruction: 'weno' (Ai-WENO-Z), 'linear' (fixed linear weights)
            or 'constant' (first order, no interpolation)
        corrections: Add the K_xx and K_xxxx terms to the finite-volume flux
        diffusion_threshold: If set, numerical diffusion is switched off at
            interfaces where the equilibrium jump is below threshold * (1 + |E|)
        strict_recovery: Raise RecoveryError instead of using fallbacks
    """

    variant: SchemeVariant = SchemeVariant.LCD_EQUILIBRIUM
    reconstruction: str = 'weno'
    corrections: bool = True
    diffusion_threshold: Optional[float] = None
    strict_recovery: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'variant', SchemeVariant.parse(self.variant))
        if self.reconstruction not in RECONSTRUCTIONS:
            raise ConfigurationError(
                f"Invalid reconstruction: {self.reconstruction}. Must be one of {list(RECONSTRUCTIONS)}"
            )
        if self.diffusion_threshold is not None and self.diffusion_threshold < 0:
            raise ConfigurationError(f"Invalid diffusion_threshold: {self.diffusion_threshold}. Must be >= 0")

    @property
    def interpolation_mode(self) -> str:
        """Mode passed to the interpolation and quadrature routines."""
        return 'linear' if self.reconstruction == 'constant' else self.reconstruction

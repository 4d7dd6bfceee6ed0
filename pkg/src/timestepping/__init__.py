"""Explicit time integration."""

from src.timestepping.ssp_rk3 import IntegrationResult, TimeControls, compute_dt, integrate, ssp_rk3_step

__all__ = ['IntegrationResult', 'TimeControls', 'compute_dt', 'integrate', 'ssp_rk3_step']

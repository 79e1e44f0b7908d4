"""2D averaged-Euler (Euler-alpha) turbulence: pseudospectral solver,
K0 vortex-blob integrator, diagnostics, and run tooling."""

from .config import RunConfig
from .diagnostics import (
    DiagnosticsRecord,
    Spectrum,
    energies,
    fit_slope,
    predicted_slope,
    shell_spectrum,
    time_averaged_spectrum,
)
from .dynamics import EvolutionState, ForcingSpec, PhysicsParams, band_forcing, initial_condition, rhs
from .simulation import run_simulation
from .spectral import GridSpec, SpectralField
from .stepper import StepController
from .vortex import BlobKernel, VortexSystem

__version__ = "0.1.0"

__all__ = [
    "BlobKernel",
    "DiagnosticsRecord",
    "EvolutionState",
    "ForcingSpec",
    "GridSpec",
    "PhysicsParams",
    "RunConfig",
    "SpectralField",
    "Spectrum",
    "StepController",
    "VortexSystem",
    "band_forcing",
    "energies",
    "fit_slope",
    "initial_condition",
    "predicted_slope",
    "rhs",
    "run_simulation",
    "shell_spectrum",
    "time_averaged_spectrum",
]

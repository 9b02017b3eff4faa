from .grid import FourierGrid, DispersionKind, make_grid
from .field import SpectralField
from .state import PhysicalState, NormalizedState, ProfileState, VectorFieldSpec
from .trajectory import SolverConfig, Trajectory
from .norm import NormParams, NormSnapshot
from .check import CheckResult
from .scattering import (ScatteringData, ResonantCache, PerturbationPair,
                         ContractionLog, CacheConfig, BuilderConfig, ResidualReport)
from .config import RunConfig

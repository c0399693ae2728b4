"""Berry phases and Wilczek-Zee holonomies of coupled angular momenta in rotating fields."""

from .adiabatic import EvolutionRun, evolve_loop, extract_geometric_phase
from .berry import (
    HolonomyResult,
    LoopSpectrum,
    berry_phase_band,
    holonomy_result,
    m_label,
    predicted_phase,
    solid_angle,
    track_bands,
    wz_holonomy,
)
from .operators import EigenSystem, eig_hermitian, kron, step_propagator
from .spin_algebra import CoupledBasis, SpinOps, axis_projection, coupled_basis, embed, spin_ops
from .systems import (
    FieldLoop,
    SystemSpec,
    field_vector,
    hamiltonian,
    loop_samples,
    quadrupole_hamiltonian,
    two_momenta_hamiltonian,
)

__version__ = "0.1.0"

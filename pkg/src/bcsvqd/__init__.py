"""Variational quantum deflation for the constant-coupling BCS pairing gap."""

from .bcs import BcsParams, build_qubit_hamiltonian, gap_from_spectrum
from .circuit import Circuit, CouplingGraph, Gate, bind_parameters, build_hardware_efficient_ansatz
from .noise import NoiseModel, RelaxationParams, thermal_relaxation_channel
from .optimizers import CobylaConfig, SpsaConfig, cobyla_minimize, spsa_minimize
from .overlap import OverlapMethod, estimate_overlap
from .pauli import PauliSum, beta_bound, eigenspectrum, group_qubitwise_commuting, to_matrix
from .simulator import Backend, expectation_exact, expectation_sampled, run_density, run_statevector
from .vqd import estimate_gap, solve_spectrum

__version__ = "0.1.0"

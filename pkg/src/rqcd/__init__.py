"""Ground-state circuit design by Riemannian optimization over the unitary
group, with parameter-shift gradient and curvature estimation on an exact
statevector simulator."""

from .estimators import (
    SubspaceSample,
    assemble_sample,
    eval_shifted,
    grad_component,
    hess_diag,
    hess_offdiag,
)
from .hamiltonian import PauliSum, build_xxz, ground_energy
from .optimizers import (
    ALGORITHMS,
    Adam,
    IterationRecord,
    OptimizerConfig,
    OptimizerTrace,
    exact_line_search,
    run,
    vqa_run,
    xxz_ground_energy,
)
from .pauli import PauliWord, commutes, index_of, sample_subspace, word_from_index
from .statevector import (
    StateVector,
    apply_cnot,
    apply_pauli,
    apply_pauli_rotation,
    apply_ry,
    apply_rz,
    expectation,
    replay,
    riemannian_grad_norm,
)

__all__ = [
    "ALGORITHMS",
    "Adam",
    "IterationRecord",
    "OptimizerConfig",
    "OptimizerTrace",
    "PauliSum",
    "PauliWord",
    "StateVector",
    "SubspaceSample",
    "apply_cnot",
    "apply_pauli",
    "apply_pauli_rotation",
    "apply_ry",
    "apply_rz",
    "assemble_sample",
    "build_xxz",
    "commutes",
    "eval_shifted",
    "exact_line_search",
    "expectation",
    "grad_component",
    "ground_energy",
    "hess_diag",
    "hess_offdiag",
    "index_of",
    "replay",
    "riemannian_grad_norm",
    "run",
    "sample_subspace",
    "vqa_run",
    "word_from_index",
    "xxz_ground_energy",
]

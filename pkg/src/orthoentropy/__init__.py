"""Entropy characterization of mutually orthogonal subfactors ``M_n ⊗ 1`` and ``u (M_n ⊗ 1) u^*``."""
from .constructions import (
    dressed_swap,
    fourier_unitary,
    identity_unitary,
    pauli_block_diagonal,
    random_unitary_in,
    swap_unitary,
)
from .errors import (
    NegativeEigenvalue,
    NotHermitian,
    NotUnitary,
    OrthoEntropyError,
    PartitionDefect,
    ShapeMismatch,
    UnsupportedAlgebra,
)
from .linalg_core import eta, haar_random_unitary, hermitian_spectrum, is_unitary, kron
from .masa_compare import bistochastic_entropy, masa_orthogonal, unistochastic
from .optimizer import SearchConfig, SearchResult, search
from .orthogonality import (
    CriterionReport,
    SubfactorPair,
    block_criterion,
    dimension_obstruction,
    full_report,
    lemma_criterion,
    petz_criterion,
    popa_check,
)
from .partition_entropy import (
    density_matrix,
    density_of_partition,
    entropy_of_unitary,
    entropy_upper_bound,
    induced_partition,
    theorem_check,
    von_neumann_entropy,
)
from .tensor_algebra import MatrixUnits, TensorContext, TracialAlgebra

__version__ = "0.1.0"

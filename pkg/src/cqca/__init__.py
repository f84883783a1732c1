"""Exact symbolic toolkit for Clifford quantum cellular automata.

Clifford QCAs map tensor products of generalized Pauli operators to signed
tensor products; after an algebraic Fourier transform they become 2x2
matrices over a Laurent polynomial ring F_p[u^+-1].  This package provides
the polynomial ring, the phase-space and Pauli algebra, automaton
validation/composition/phase tracking, shear-Fourier factorization of 1D
automata, the periodic-boundary quotient theory, and an independent dense
matrix oracle for stabilizer uniqueness.
"""

from .automaton import (
    Cqca,
    ScaMatrix,
    SymplecticReport,
    apply_pauli,
    apply_vector,
    center,
    complete_generator,
    compose,
    inverse,
    neighborhood,
    phase_function,
    restrict,
    trivial_construction,
    validate,
)
from .errors import (
    CqcaError,
    DomainError,
    GuardrailError,
    InternalError,
    PolyParseError,
    StructureError,
)
from .factorize import (
    Fourier,
    Generator,
    GeneratorSeq,
    Shear,
    decompose,
    fourier_matrix,
    reduce_step,
    shear_matrix,
    sl2_constant_decompose,
    wsym,
)
from .oracle import commute_dense, joint_eigenspace_dim, weyl_dense
from .phasespace import (
    IsotropyVerdict,
    PauliProduct,
    PhaseVector,
    commutation_phase,
    embed_isotropic,
    isotropy_verdict,
    pauli_to_vector,
    symplectic_form,
    vector_to_pauli,
    weyl_multiply,
)
from .ring import (
    LaurentPoly,
    exact_div,
    format_poly,
    gcd_extended,
    is_reflection_invariant,
    parse_poly,
    poly_divmod,
    reflection_center,
)
from .torus import (
    TorusLattice,
    TorusPoly,
    TorusSca,
    TorusVector,
    TorusVerdict,
    canonicalize,
    gamma_from_adjacency,
    graph_state_automaton,
    smith_normal_form,
    stabilizer_generators,
    torus_complete,
    torus_invert,
    torus_stabilizer_verdict,
    torus_symplectic,
    torus_validate,
    vector_to_torus,
)

__version__ = "0.1.0"

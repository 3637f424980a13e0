"""Depth-aware Clifford and CNOT+phase synthesis for LNN and all-to-all layouts."""

from .circuit import (
    Circuit,
    Connectivity,
    Gate,
    cnot,
    cz,
    expand_swaps,
    h,
    inverse,
    phase,
    swap,
    two_qubit_depth,
    validate_connectivity,
    x,
    z,
)
from .a2a import (
    CzBasis,
    CzVector,
    LinearFunction,
    collect_linear_functions,
    cz_basis,
    cz_vector,
    gauss_synth,
    insert_cz,
    pmh_synth,
    schedule_phases_a2a,
)
from .gf2 import BitMatrix, BitVector, random_invertible
from .lnn import (
    assemble_hfree_lnn,
    box_network,
    cz_reversal_network,
    find_phase_schedule,
    northwest_triangularize,
    synth_clifford_lnn,
)
from .qasm import ParseError, emit_text, parse_text
from .stats import (
    StatsReport,
    StatsRow,
    register_synthesizer,
    run_insertcz_stats,
    sample_hfree,
    sample_linear,
)
from .verify import (
    CliffordTableau,
    HadamardFreeTarget,
    equiv,
    hfree_canonical,
    hfree_from_tableau,
    tableau_from_hfree,
    tableau_of,
)

__version__ = "0.1.0"

"""Classical-quantum polar codes for the BPSK pure-loss optical channel.

Modules:
    channel       BPSK channel and its exact real embedding
    capacity      capacity / error-probability formulas and efficiency tables
    transform     polar transform u -> u B_N F^{(x)n}
    construction  fidelity profiles, information sets, error bound, code files
    quantum       density-matrix helpers (entropy, fidelity, Helstrom test)
    decoder       quantum successive-cancellation decoder, exact and sampled
    classical     classical polar code over the induced DMCs
    cli           ``cqpolar`` command line
"""

from .capacity import Scheme, efficiency_table, holevo_bpsk, dolinar_pe, g
from .channel import BpskChannel, QubitEmbedding, codeword_state, overlap
from .classical import Receiver, classical_sc_decode, induce_dmc, simulate_classical
from .construction import (ConstructionMode, FidelityProfile, PolarCode, exact_profile,
                           exact_split_fidelity, parse_code, format_code, polarized_fraction,
                           proposition1_bound, select_information_set, surrogate_profile)
from .decoder import SCMeasurement, exact_block_error, exact_success_prob, sc_decode, simulate_quantum
from .exceptions import GuardError, NumericAnomaly, ParameterError
from .quantum import helstrom
from .transform import bit_reversal, encode

__version__ = "0.1.0"

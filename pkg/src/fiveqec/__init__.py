"""Simulator and toolkit for the five-qubit perfect quantum error
correcting code: encoding, syndrome extraction, transversal logical
gates, decoding, decoherence modelling, tomography and circuit
recompilation."""

from .code import (build_decoder, build_encoder, encode, encode_decode,
                   inject_error, logical_amplitudes, logical_pauli,
                   logical_state)
from .core import (Circuit, DensityMatrix, Gate, Layer, StateVector,
                   circuit_unitary, partial_trace, state_fidelity)
from .noise import (DeviceParams, GateTiming, NoiseParams, ReadoutModel,
                    decoherence_kraus, paper_device, pure_dephasing_time,
                    sample_measurement)
from .pauli import (PauliString, StabilizerSet, build_syndrome_table,
                    expand_group, five_qubit_generators, syndrome_of_error)
from .tomography import (mle_physical, process_fidelity, project_code_space,
                         qpt_single_qubit, stabilizer_fidelity,
                         syndrome_success_probability)

__version__ = "0.1.0"

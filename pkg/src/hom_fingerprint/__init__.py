"""Two-photon interference quantum fingerprinting model."""
from .chernoff import (ChernoffResult, asymptotic_error, chernoff_information,
                       exact_zeta, rescaled_chernoff_zeta, two_click_chernoff)
from .codes import (Codeword, DistanceProfile, LinearCode, binary_entropy, encode,
                    extend_codeword, generate_random_linear_code, gv_rate,
                    hamming_distance, map_coherent_to_twophoton_distance,
                    modified_gv_rate, overhead_ratio, relative_distance)
from .decision import (Decision, TestOutcome, binomial_log_pmf, decide,
                       exact_error_probability)
from .errors import (CodeConstructionError, DomainError, FingerprintError,
                     LengthMismatchError, NoCrossoverError)
from .imperfections import (HypothesisPair, ModelValidityWarning, SourceParams,
                            coincidence_fraction, effective_visibility,
                            hypothesis_pair, two_click_probability)
from .information import (ProtocolOperatingPoint, classical_bound, coherent_information,
                          crossover_length, operating_point, two_photon_information)
from .interference import (SplitDistribution, coherent_click_probability,
                           coincidence_probability, misid_probability_coherent,
                           misid_probability_twophoton, single_source_pair_split,
                           visibility)
from .kernels import BACKEND
from .montecarlo import (Classification, EventTally, RunOutcome, simulate_batch,
                         simulate_protocol, simulate_run)

__version__ = "0.1.0"

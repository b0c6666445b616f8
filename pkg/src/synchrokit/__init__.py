"""Synchronizing automata toolkit: the Eulerian series A_m, exact reset
thresholds by subset search, backward tracing, and exhaustive censuses."""
from ._accel import BACKEND
from .automaton import (
    Dfa,
    LetterProfile,
    StateSet,
    apply_word,
    apply_word_inverse,
    classify_letter,
    format_word,
    image,
    is_eulerian,
    is_extensible,
    parse_word,
    preimage,
)
from .census import (
    CensusRecord,
    CensusSpec,
    canonical_form,
    census_run,
    conjecture_bound,
    enumerate_eulerian,
    verify_conjecture,
)
from .errors import (
    BudgetExceededError,
    DomainError,
    InvalidLetterError,
    InvalidStateError,
    NotExtensibleError,
    NotSynchronizingError,
    ParameterError,
    SizeError,
    SynchroError,
)
from .search import (
    LevelProfile,
    RtResult,
    backward_level_profile,
    is_synchronizing,
    reset_threshold_backward,
    reset_threshold_exact,
    shortest_extending_word,
)
from .series import (
    SeriesParams,
    build_am,
    build_cerny,
    build_reset_word,
    build_t,
    build_v,
    build_w,
    predicted_rt,
    subset_family,
)
from .words import (
    PreimageChain,
    TraceRow,
    forbidden_factor_check,
    involutory_reversal_holds,
    is_greedy,
    is_straight,
    preimage_chain,
    verify_reset,
)

__version__ = "0.1.0"

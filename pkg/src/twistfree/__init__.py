"""Twisted repetitions in fixed points of cyclic shift morphisms."""

__version__ = "0.1.0"

from .words import (  # noqa: E402
    Alphabet,
    Permutation,
    Word,
    parse_word,
    perm_compose,
    perm_is_cyclic,
    perm_order,
    perm_power,
    render_word,
    twist,
)
from .morphism import (  # noqa: E402
    CyclicShiftMorphism,
    DescentReport,
    apply_morphism,
    descend_occurrence,
    desubstitute,
    generate_prefix,
    letter_at,
)
from .avoidance import (  # noqa: E402
    FreenessReport,
    Occurrence,
    RepetitionQuery,
    audit_length3_structure,
    is_strong_repetition,
    scan_fast,
    scan_naive,
    theorem_campaign,
    verify_freeness,
)
from .complexity import (  # noqa: E402
    ComplexityProfile,
    LinearFit,
    complexity_profile,
    entropy_estimate,
    factor_count_naive,
    fit_linear,
)

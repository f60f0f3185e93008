"""Exact trace polynomials of words in F2 and word-map statistics on SL(2,q).

Layers, bottom to top: free-group words (`words`), exact polynomial
arithmetic (`tripoly`, `unipoly`, `gf`), the trace-polynomial engine
(`trace`), functional-decomposition classification (`decompose`), point
counting (`probes`), the SL(2,q)/PSL(2,q) enumeration laboratory (`sl2`),
verification suites (`experiments`), and plumbing (`cache`, `cli`).
"""

from .words import (
    DegenerateWordError,
    Word,
    WordStats,
    WordSyntaxError,
    canonicalize,
    convenient_form,
    enumerate_words,
    parse,
    proper_power_root,
    sample_words,
    stats,
    trace_similar,
)
from .tripoly import TriPoly, frobenius_strip
from .unipoly import UniPoly, chebyshev_v, dickson, dickson_apply
from .gf import GF, field, prime_powers, primes_in
from .trace import (
    TraceEngine,
    TraceResult,
    eval_trace_direct,
    syllable_polys,
    trace_poly,
    u_expansion,
)
from .decompose import (
    COMPOSITE_NOT_SPECIAL,
    COMPOSITE_Q,
    NONCOMPOSITE_P,
    NONCOMPOSITE_Q,
    SPECIAL_P,
    CompositionWitness,
    GlobalVerdict,
    PowerWordReport,
    PrimeVerdict,
    WildCompositionError,
    classify_global,
    classify_p,
    classify_rational,
    dickson_decompose,
    decompose_in_u,
    power_word_report,
)
from .probes import count_level_set, level_set_counts
from .sl2 import (
    ClassInfo,
    ClassTable,
    EquidistReport,
    FiberReport,
    FiberRow,
    ImageReport,
    LangWeilReport,
    SpectrumProbe,
    build_class_table,
    delta_locus,
    enumerate_group,
    epsilon_feasible,
    equidist_epsilon,
    fiber_distribution,
    fraction_le_inv_sqrt,
    image_analysis,
    lang_weil_check,
    pi_fiber_count,
    pi_fiber_table,
    psl_fiber_distribution,
    spectrum_probe,
    word_value,
)
from .experiments import (
    GenericityReport,
    MeasureSheet,
    TheoremRun,
    genericity_csv,
    genericity_scan,
    measure_preserving_report,
    verify_theorem_p_equi,
)
from .cache import TraceCache, cached_trace_poly

__version__ = "0.1.0"

__all__ = [
    "COMPOSITE_NOT_SPECIAL",
    "COMPOSITE_Q",
    "ClassInfo",
    "ClassTable",
    "CompositionWitness",
    "DegenerateWordError",
    "EquidistReport",
    "FiberReport",
    "FiberRow",
    "GF",
    "GenericityReport",
    "GlobalVerdict",
    "ImageReport",
    "LangWeilReport",
    "MeasureSheet",
    "NONCOMPOSITE_P",
    "NONCOMPOSITE_Q",
    "PowerWordReport",
    "PrimeVerdict",
    "SPECIAL_P",
    "SpectrumProbe",
    "TheoremRun",
    "TraceCache",
    "TraceEngine",
    "TraceResult",
    "TriPoly",
    "UniPoly",
    "WildCompositionError",
    "Word",
    "WordStats",
    "WordSyntaxError",
    "build_class_table",
    "cached_trace_poly",
    "canonicalize",
    "chebyshev_v",
    "classify_global",
    "classify_p",
    "classify_rational",
    "convenient_form",
    "count_level_set",
    "decompose_in_u",
    "delta_locus",
    "dickson",
    "dickson_apply",
    "dickson_decompose",
    "enumerate_group",
    "enumerate_words",
    "epsilon_feasible",
    "equidist_epsilon",
    "eval_trace_direct",
    "fiber_distribution",
    "field",
    "fraction_le_inv_sqrt",
    "frobenius_strip",
    "genericity_csv",
    "genericity_scan",
    "image_analysis",
    "lang_weil_check",
    "level_set_counts",
    "measure_preserving_report",
    "parse",
    "pi_fiber_count",
    "pi_fiber_table",
    "prime_powers",
    "primes_in",
    "proper_power_root",
    "psl_fiber_distribution",
    "sample_words",
    "spectrum_probe",
    "stats",
    "syllable_polys",
    "trace_poly",
    "trace_similar",
    "u_expansion",
    "verify_theorem_p_equi",
    "word_value",
]

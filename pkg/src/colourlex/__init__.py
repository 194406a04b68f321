"""Word-colour association lexicons: building, analysis and automatic prediction."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    COLOURS,
    Colour,
    ColourCounts,
    LexiconEntry,
    Polarity,
    ThesaurusCategory,
    WordSense,
    colour_order,
    polarity_colour_set,
)
from .annotate import (  # noqa: E402
    Assignment,
    Hit,
    aggregate,
    agreement_histogram,
    chance_distinct_probability,
    colour_distribution,
    generate_hit,
    validate_assignment,
)
from .categories import (  # noqa: E402
    category_colour_strength,
    category_imageability,
    extract_gold_standard,
    pearson_correlation,
    spearman_correlation,
)
from .signatures import LabelLexicon, association_signature, top_colours  # noqa: E402
from .corpus import (  # noqa: E402
    CoocTable,
    NgramRecord,
    Prediction,
    baseline_predict,
    category_colour_conditional,
    category_polarity,
    colour_frequency_ranking,
    evaluate_accuracy,
    load_ngrams,
    predict_by_cooccurrence,
    predict_by_cooccurrence_with_polarity,
    window_cooccurrence,
)
from .wordnet import (  # noqa: E402
    load_information_content,
    load_wordnet,
    predict_by_wordnet,
    synset_closeness,
    word_colour_closeness,
)

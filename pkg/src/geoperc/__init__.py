"""Per-grid-cell smoothed bigram language models over geo-tagged posts.

Build one model per grid cell from a corpus of geo-tagged short texts,
then query the ensemble with a perception phrase to get a posterior heat
map over the cells, with iterative zoom into hot spots.
"""

from .ensemble import (
    BuildReport,
    HeatMap,
    ModelEnsemble,
    PrepConfig,
    build_ensemble,
    posterior,
    top_cells,
    zoom,
)
from .geogrid import BBox, CellId, GridSpec, cell_bbox, locate, make_grid
from .ingest import Post, parse_posts, read_posts_file
from .lmcore import (
    CellCounts,
    DiscountSet,
    EstimatorConfig,
    QueryPhrase,
    continuation_prob,
    count_ngrams,
    estimate_discounts,
    interpolated_bigram,
    mkn_bigram,
    mle_bigram,
    phrase_loglik,
)
from .textprep import (
    MISC,
    StopwordSet,
    Vocabulary,
    apply_stopwords,
    build_stopwords,
    build_vocab,
    normalize_text,
)

__version__ = "0.1.0"

"""Context-driven tag recommendation for web videos.

Given a video's raw tags and title, the pipeline builds a small query of tag
entities, collects web documents about the same event, mines a co-occurrence
graph of the entities those documents share, scores the entities with a
damped random walk and recommends the top-scoring new ones as tags. An eval
harness measures whether the enriched tag sets categorize videos better than
the raw ones.
"""

from .corpus import (
    CATEGORIES,
    FormatError,
    Gazetteer,
    Lexicon,
    Video,
    WebDocument,
    fold,
    load_documents,
    load_gazetteer,
    load_lexicon,
    load_videos,
    save_documents,
    save_gazetteer,
    save_lexicon,
    save_videos,
)
from .entity import TagEntity, Token, entity_attributes, extract_entities, extract_from_text, tokenize
from .evaluate import (
    FeatureVector,
    LinearModel,
    Vocabulary,
    average_precision,
    build_vocabulary,
    mean_average_precision,
    predict,
    split_videos,
    tags_for,
    train,
    vectorize,
)
from .graph import (
    ContextDocument,
    CooccurrenceGraph,
    ScoreVector,
    build_context,
    build_graph,
    edge_dump,
    row_normalize,
    significance,
)
from .query import Query, QueryError, construct_query, query_text
from .recommend import (
    Recommendation,
    enriched_tags,
    load_recommendations,
    recommend,
    save_recommendations,
)
from .retrieval import (
    MediaForm,
    OfflineIndex,
    RemoteBackend,
    SameContextResource,
    SearchBackend,
    classify_media_form,
    index_documents,
    same_context_filter,
    search,
)

__version__ = "0.1.0"

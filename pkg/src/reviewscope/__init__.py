"""Review-mining pipeline: sentence gating, keyphrase extraction,
density-based topic clustering, and dictionary classification benchmarks."""

from .clustering import ClusterParams, TopicCluster, build_dictionary, cluster_density, recursive_cluster
from .corpus import Corpus, LabeledDocument, Review, load_labeled, load_reviews
from .embedding import (
    EmbeddingStore,
    RemoteProvider,
    StoreProvider,
    TestEmbedder,
    cosine_similarity,
    load_store,
    pca_project_2d,
    write_store,
)
from .errors import ReviewscopeError
from .evaluation import (
    TopicDictionary,
    TrainConfig,
    evaluate_accuracy,
    run_benchmark,
    train_classifier,
    vectorize,
)
from .keyphrase import Keyphrase, extract_keyphrases, generate_candidates, ngram_baseline_extract
from .pipeline import PipelineConfig, run_pipeline
from .sentiment import SentimentClass, classify_sentiment, gate_sentences
from .textprep import CleaningConfig, Sentence, clean_text, split_sentences

__version__ = "0.1.0"

__all__ = [
    "ClusterParams",
    "CleaningConfig",
    "Corpus",
    "EmbeddingStore",
    "Keyphrase",
    "LabeledDocument",
    "PipelineConfig",
    "RemoteProvider",
    "Review",
    "ReviewscopeError",
    "Sentence",
    "SentimentClass",
    "StoreProvider",
    "TestEmbedder",
    "TopicCluster",
    "TopicDictionary",
    "TrainConfig",
    "build_dictionary",
    "classify_sentiment",
    "clean_text",
    "cluster_density",
    "cosine_similarity",
    "evaluate_accuracy",
    "extract_keyphrases",
    "gate_sentences",
    "generate_candidates",
    "load_labeled",
    "load_reviews",
    "load_store",
    "ngram_baseline_extract",
    "pca_project_2d",
    "recursive_cluster",
    "run_benchmark",
    "run_pipeline",
    "split_sentences",
    "train_classifier",
    "vectorize",
    "write_store",
]

"""Exception hierarchy shared across the pipeline stages."""


class ReviewscopeError(Exception):
    """Base class for all errors raised by this package."""


class CorpusError(ReviewscopeError):
    """Corpus loading or serialization failed."""


class SamplingError(CorpusError):
    """Stratified sampling cannot satisfy the requested per-label count."""


class SentimentError(ReviewscopeError):
    """Sentiment scoring input is invalid (lexicon/sidecar parse, range)."""


class GatingError(SentimentError):
    """A sentence could not be resolved to a sentiment score while gating."""


class SimilarityError(ReviewscopeError):
    """Cosine similarity is undefined for the given inputs."""


class StoreFormatError(ReviewscopeError):
    """On-disk embedding store is malformed.

    ``offset`` is the byte offset at which the problem was detected.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class EmbeddingError(ReviewscopeError):
    """A provider could not produce a vector for a text."""


class EmbeddingLookupError(EmbeddingError):
    """Exact-match store lookup missed a phrase."""


class TransportError(EmbeddingError):
    """Remote provider failed after bounded retries."""


class ProjectionError(ReviewscopeError):
    """2-D PCA projection is undefined for the given vectors."""


class CandidateError(ReviewscopeError):
    """N-gram candidate generation received an empty token list."""


class ClusteringError(ReviewscopeError):
    """Density computation, splitting, or recursive clustering failed."""


class TrainingError(ReviewscopeError):
    """Classifier training preconditions are not met."""


class EvaluationError(ReviewscopeError):
    """Accuracy evaluation preconditions are not met."""


class ConfigError(ReviewscopeError):
    """A configuration file or value does not validate."""


class StageError(ReviewscopeError):
    """A pipeline stage aborted; carries the stage name and the cause."""

    def __init__(self, stage: str, cause: str):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause

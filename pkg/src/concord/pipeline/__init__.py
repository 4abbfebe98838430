"""Pre-processing chain: markup cleanup, segmentation, tokenization, annotation."""

from .annotate import (
    AnnotatorLaunchFailure,
    AnnotatorProtocolViolation,
    ExternalAnnotator,
    LexiconAnnotator,
    annotate,
    correct_lemmas,
)
from .cleanup import CleanupReport, CleanupWarning, UnbalancedMarkup, clean_markup
from .segment import (
    DEFAULT_ABBREVIATIONS,
    SegmenterConfig,
    segment_sentences,
    tokenize,
)

__all__ = [
    "AnnotatorLaunchFailure",
    "AnnotatorProtocolViolation",
    "CleanupReport",
    "CleanupWarning",
    "DEFAULT_ABBREVIATIONS",
    "ExternalAnnotator",
    "LexiconAnnotator",
    "SegmenterConfig",
    "UnbalancedMarkup",
    "annotate",
    "clean_markup",
    "correct_lemmas",
    "segment_sentences",
    "tokenize",
]

"""stylocloak: anonymize text authorship and audit texts for the traces
that anonymization leaves behind.

The transform side runs a staged pipeline (round-trip translation, synonym
paraphrase, zero-width steganography, persona-conditioned revision); the
audit side computes five stylometric features, ranks them by information
gain, classifies with decision trees and forests, and clusters documents by
Burrows's Delta.
"""

__version__ = "0.1.0"

from .errors import StylocloakError
from .estimators import (
    BurrowsDeltaClusters,
    InfoGainForestClassifier,
    InfoGainTreeClassifier,
    StyloFeaturizer,
    TextAnonymizer,
)
from .pipeline import PipelineConfig, run_corpus, run_record
from .stego import capacity, embed, extract, strip
from .stylometry import FeatureVector, extract_features, word_ttr
from .textcore import Document, TokenMode, tokenize

__all__ = [
    "BurrowsDeltaClusters",
    "Document",
    "FeatureVector",
    "InfoGainForestClassifier",
    "InfoGainTreeClassifier",
    "PipelineConfig",
    "StylocloakError",
    "StyloFeaturizer",
    "TextAnonymizer",
    "TokenMode",
    "capacity",
    "embed",
    "extract",
    "extract_features",
    "run_corpus",
    "run_record",
    "strip",
    "tokenize",
    "word_ttr",
]

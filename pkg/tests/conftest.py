from __future__ import annotations

import numpy as np
import pytest

from stylocloak.selection import LabeledMatrix
from stylocloak.textcore import FunctionWordList, LemmaTable, bundled_path

# The sentence used throughout the docs for lexical-statistics fixtures:
# 33 tokens, 28 distinct surfaces, TTR 0.848.
AURELIUS = (
    "If you are distressed by anything external, the pain is not due to the "
    "thing itself, but to your estimate of it; and this you have the power "
    "to revoke at any moment"
)

# Ten-row reference matrix of the five retained features (paired raw/anonymized
# readings); every feature separates the classes perfectly.
# Columns: l_cont_a, l_func_a, l_cont_t, l_func_t, ttr_lemmas.
REFERENCE_ROWS = [
    ("I-NANON", 0, (0.5000, 0.6765, 0.5000, 0.5588, 0.9412)),
    ("I-ANON", 1, (0.1250, 0.2917, 0.1250, 0.2917, 0.4167)),
    ("II-NANON", 0, (0.4250, 0.6000, 0.4000, 0.4250, 0.7750)),
    ("II-ANON", 1, (0.2593, 0.1852, 0.2593, 0.1852, 0.4444)),
    ("III-NANON", 0, (0.3611, 0.6667, 0.3611, 0.4722, 0.7500)),
    ("III-ANON", 1, (0.1000, 0.0000, 0.1000, 0.0000, 0.1000)),
    ("IV-NANON", 0, (0.4412, 0.6471, 0.3824, 0.5000, 0.7941)),
    ("IV-ANON", 1, (0.0526, 0.1579, 0.0526, 0.1579, 0.2105)),
    ("V-NANON", 0, (0.3590, 0.6410, 0.3077, 0.5128, 0.7692)),
    ("V-ANON", 1, (0.0625, 0.0625, 0.0625, 0.0625, 0.1250)),
]


@pytest.fixture(scope="session")
def reference_matrix() -> LabeledMatrix:
    x = np.array([row[2] for row in REFERENCE_ROWS])
    y = np.array([row[1] for row in REFERENCE_ROWS])
    return LabeledMatrix(x, y)


@pytest.fixture(scope="session")
def fwl() -> FunctionWordList:
    return FunctionWordList.load(bundled_path("lexicons", "function_words.txt"))


@pytest.fixture(scope="session")
def lemmas() -> LemmaTable:
    return LemmaTable.load(bundled_path("lexicons", "lemmas.tsv"))


@pytest.fixture(scope="session")
def identity_lemmas() -> LemmaTable:
    return LemmaTable()

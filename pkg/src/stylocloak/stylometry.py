"""The five retained stylometric features plus supporting lexical counts.

All five ratios share a single denominator, the total token count, so a
token-ballooning attack depresses every one of them at once.  A token counts
as a recognized content word only when its lemma is in the content lexicon
and it is not a function word; fragments produced by invisible-character
splitting therefore land in neither category.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .errors import BadHeaderError, BadLabelError, MissingFileError
from pathlib import Path

from .textcore import Document, FunctionWordList, LemmaTable, TokenMode, tokenize

# Feature order used by matrices, rankings, and the feature CSV.
FEATURE_NAMES = ("l_cont_a", "l_func_a", "l_cont_t", "l_func_t", "ttr_lemmas")

CSV_HEADER = [
    "text_id", "label", "mode",
    "l_cont_a", "l_func_a", "l_cont_t", "l_func_t", "ttr_lemmas",
    "word_ttr", "token_count", "type_count",
]

NANON, ANON = 0, 1


@dataclass(frozen=True)
class FeatureVector:
    text_id: str
    mode: TokenMode
    l_cont_a: float
    l_func_a: float
    l_cont_t: float
    l_func_t: float
    ttr_lemmas: float
    word_ttr: float
    token_count: int
    type_count: int
    label: int | None = None
    empty: bool = False

    def values(self) -> tuple[float, ...]:
        """The five retained features, in FEATURE_NAMES order."""
        return (self.l_cont_a, self.l_func_a, self.l_cont_t, self.l_func_t, self.ttr_lemmas)


def extract_features(
    doc: Document,
    mode: TokenMode,
    fwl: FunctionWordList,
    lemmas: LemmaTable,
    label: int | None = None,
) -> FeatureVector:
    tokens = tokenize(doc.text, mode)
    n = len(tokens)
    if n == 0:
        return FeatureVector(doc.id, mode, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0, 0, label, empty=True)

    func_tokens = 0
    func_types = set()
    cont_tokens = 0
    cont_types = set()
    lemma_types = set()
    surface_types = set()
    for tok in tokens:
        surface = tok.surface
        lemma = lemmas.lookup(surface)
        surface_types.add(surface)
        lemma_types.add(lemma)
        if surface in fwl:
            func_tokens += 1
            func_types.add(surface)
        elif lemmas.is_content_lemma(lemma):
            cont_tokens += 1
            cont_types.add(surface)

    return FeatureVector(
        text_id=doc.id,
        mode=mode,
        l_cont_a=cont_tokens / n,
        l_func_a=func_tokens / n,
        l_cont_t=len(cont_types) / n,
        l_func_t=len(func_types) / n,
        ttr_lemmas=len(lemma_types) / n,
        word_ttr=len(surface_types) / n,
        token_count=n,
        type_count=len(surface_types),
        label=label,
    )


def word_ttr(text: str, mode: TokenMode = TokenMode.RAW) -> float:
    """Distinct lowercased surfaces over total tokens; 0 for empty text."""
    tokens = tokenize(text, mode)
    if not tokens:
        return 0.0
    return len({t.surface for t in tokens}) / len(tokens)


def write_feature_csv(vectors, out) -> None:
    """Write feature rows (ratios at 4 decimals) to a path or text file."""
    close = False
    if isinstance(out, (str, Path)):
        out = open(out, "w", encoding="utf-8", newline="")
        close = True
    try:
        writer = csv.writer(out)
        writer.writerow(CSV_HEADER)
        for v in vectors:
            writer.writerow([
                v.text_id,
                "" if v.label is None else v.label,
                v.mode.value,
                f"{v.l_cont_a:.4f}", f"{v.l_func_a:.4f}", f"{v.l_cont_t:.4f}",
                f"{v.l_func_t:.4f}", f"{v.ttr_lemmas:.4f}", f"{v.word_ttr:.4f}",
                v.token_count, v.type_count,
            ])
    finally:
        if close:
            out.close()


def feature_csv_text(vectors) -> str:
    buf = io.StringIO()
    write_feature_csv(vectors, buf)
    return buf.getvalue()


def read_feature_csv(path) -> list[FeatureVector]:
    """Read back a feature CSV produced by write_feature_csv."""
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"no such file: {path}")
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise BadHeaderError(f"expected feature CSV header {CSV_HEADER}, got {header}")
        rows = []
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            label_field = row[1].strip()
            if label_field not in ("", "0", "1"):
                raise BadLabelError(row_no, label_field)
            rows.append(FeatureVector(
                text_id=row[0],
                label=None if label_field == "" else int(label_field),
                mode=TokenMode(row[2]),
                l_cont_a=float(row[3]), l_func_a=float(row[4]), l_cont_t=float(row[5]),
                l_func_t=float(row[6]), ttr_lemmas=float(row[7]), word_ttr=float(row[8]),
                token_count=int(row[9]), type_count=int(row[10]),
            ))
    return rows

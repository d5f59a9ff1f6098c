"""Dataset ingestion, pairing, export naming, and the bundled sample corpus.

All files are UTF-8 with invisible code points preserved verbatim: exported
texts are steganographic carriers and must survive a round trip bit-exact.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    BadHeaderError,
    BadLabelError,
    DuplicateIdsError,
    MissingFileError,
    RomanRangeError,
)
from .textcore import bundled_path

DATASET_HEADER = ["label", "text"]
PAIRS_HEADER = ["pair_id", "nanon_text", "anon_text"]

NANON, ANON = 0, 1


@dataclass(frozen=True)
class LabeledRecord:
    text_id: str
    label: int             # 0 = raw source, 1 = anonymized
    text: str


@dataclass(frozen=True)
class PairRecord:
    index: int             # 1-based pair number
    nanon: LabeledRecord
    anon: LabeledRecord

    def __post_init__(self):
        if self.nanon.label != NANON or self.anon.label != ANON:
            raise ValueError("pair sides must carry labels 0 (nanon) and 1 (anon)")


def import_csv(path) -> list[LabeledRecord]:
    """Read a ``label,text`` dataset (RFC-4180 quoting).

    text_ids are synthesized as rec_00001... in row order.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"no such file: {path}")
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != DATASET_HEADER:
            raise BadHeaderError(f"expected header {DATASET_HEADER}, got {header}")
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise BadHeaderError(f"row {row_no}: expected 2 fields, got {len(row)}")
            label_field = row[0].strip()
            if label_field not in ("0", "1"):
                raise BadLabelError(row_no, row[0])
            records.append(LabeledRecord(f"rec_{len(records) + 1:05d}", int(label_field), row[1]))
    return records


def export_csv(records, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(DATASET_HEADER)
        for rec in records:
            writer.writerow([rec.label, rec.text])


def import_pairs_csv(path) -> list[PairRecord]:
    """Read a ``pair_id,nanon_text,anon_text`` paired dataset."""
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"no such file: {path}")
    pairs = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != PAIRS_HEADER:
            raise BadHeaderError(f"expected header {PAIRS_HEADER}, got {header}")
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise BadHeaderError(f"row {row_no}: expected 3 fields, got {len(row)}")
            try:
                k = int(row[0])
            except ValueError:
                raise BadLabelError(row_no, row[0]) from None
            pairs.append(PairRecord(
                k,
                LabeledRecord(f"pair_{k:03d}_nanon", NANON, row[1]),
                LabeledRecord(f"pair_{k:03d}_anon", ANON, row[2]),
            ))
    return pairs


def export_pairs_csv(pairs, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(PAIRS_HEADER)
        for pair in pairs:
            writer.writerow([pair.index, pair.nanon.text, pair.anon.text])


def to_roman(n: int) -> str:
    """Standard subtractive Roman numerals for 1..3999."""
    if not 1 <= n <= 3999:
        raise RomanRangeError(f"{n} is outside 1..3999")
    table = (
        (1000, "M"), (900, "CM"), (500, "D"), (400, "CD"),
        (100, "C"), (90, "XC"), (50, "L"), (40, "XL"),
        (10, "X"), (9, "IX"), (5, "V"), (4, "IV"), (1, "I"),
    )
    out = []
    for value, glyph in table:
        while n >= value:
            out.append(glyph)
            n -= value
    return "".join(out)


def pair_filenames(index: int) -> tuple[str, str]:
    """Fig-style naming: pair k maps to <ROMAN(k)>_data_point_<2k-1>.txt
    (nanon) and <ROMAN(k)>_data_point_<2k>.txt (anon), suffix zero-padded
    to 3 digits; odd suffix <=> label 0."""
    roman = to_roman(index)
    return (
        f"{roman}_data_point_{2 * index - 1:03d}.txt",
        f"{roman}_data_point_{2 * index:03d}.txt",
    )


def export_pairs(pairs, directory) -> list[Path]:
    """Write each pair as two UTF-8 text files; no trailing newline added."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for pair in pairs:
        nanon_name, anon_name = pair_filenames(pair.index)
        for name, rec in ((nanon_name, pair.nanon), (anon_name, pair.anon)):
            target = directory / name
            with open(target, "w", encoding="utf-8", newline="") as fh:
                fh.write(rec.text)
            written.append(target)
    return written


def check_unique_ids(records) -> None:
    seen = set()
    for rec in records:
        if rec.text_id in seen:
            raise DuplicateIdsError(f"duplicate text_id: {rec.text_id}")
        seen.add(rec.text_id)


def sample_corpus() -> list[LabeledRecord]:
    """The bundled synthetic 20-record sample corpus (all label 0)."""
    return import_csv(bundled_path("data", "sample_corpus.csv"))

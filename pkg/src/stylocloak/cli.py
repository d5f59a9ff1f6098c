"""Command-line interface.

Data goes to standard output or ``--out`` files; progress goes to the error
stream (suppressed by ``--quiet``).  Exit codes: 0 success, 1 runtime
failure (failed record, backend error), 2 usage or configuration error.
Every error path prints a single machine-parsable line
``error: <code>: <message>`` on the error stream.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .attribution import delta_matrix, to_newick, tree_to_json, upgma, write_matrix_csv
from .corpus import (
    LabeledRecord,
    PairRecord,
    check_unique_ids,
    export_pairs,
    import_csv,
    import_pairs_csv,
    sample_corpus,
)
from .errors import ConfigError, StylocloakError
from .pipeline import (
    PRESETS,
    PayloadPolicy,
    PipelineConfig,
    Resources,
    load_config,
)
from .selection import (
    LabeledMatrix,
    load_model,
    predict,
    rank_features,
    save_model,
    train_forest,
)
from .stego import embed, extract, strip
from .stylometry import extract_features, read_feature_csv, write_feature_csv
from .textcore import Document, TokenMode


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"error: usage: {message}", file=sys.stderr)
        self.print_usage(sys.stderr)
        raise SystemExit(2)


def _common_flags(parser):
    parser.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    parser.add_argument("--config", help="pipeline config JSON (see docs/config.md)")
    parser.add_argument("--preset", choices=sorted(PRESETS), help="pipeline step preset")
    parser.add_argument("--mode", choices=["raw", "sanitized"], default="raw",
                        help="tokenizer view for feature extraction (default raw)")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")


def build_parser() -> _Parser:
    parser = _Parser(prog="stylocloak", description="Adversarial-stylometry toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("run", parents=[], help="run the anonymization pipeline")
    _common_flags(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="in_path", help="dataset CSV (label,text) of source rows")
    src.add_argument("--text", help="anonymize a single text")
    p.add_argument("--out", help="labeled CSV output (rows 0=source, 1=anonymized)")
    p.add_argument("--pairs", help="paired CSV output (pair_id,nanon_text,anon_text)")
    p.add_argument("--trace", help="JSONL per-record trace with per-stage snapshots")
    p.add_argument("--parallelism", type=int, help="worker threads (default 1)")
    p.add_argument("--fail-fast", action="store_true", help="stop at the first failed record")
    payload = p.add_mutually_exclusive_group()
    payload.add_argument("--payload-hex", help="fixed payload for every record, hex encoded")
    payload.add_argument("--payload-random", type=int, metavar="K",
                         help="draw K random payload bytes per record (default 8)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("stego", help="steganographic codec operations")
    stego_sub = p.add_subparsers(dest="stego_command", metavar="OP")
    for op in ("embed", "extract", "strip"):
        sp = stego_sub.add_parser(op)
        _common_flags(sp)
        group = sp.add_mutually_exclusive_group(required=True)
        group.add_argument("--text", help="carrier text on the command line")
        group.add_argument("--in", dest="in_path", help="carrier text file")
        if op == "embed":
            pay = sp.add_mutually_exclusive_group(required=True)
            pay.add_argument("--payload-hex", help="payload bytes, hex encoded")
            pay.add_argument("--payload-file", help="payload bytes from a file")
        sp.add_argument("--out", help="write the result to a file instead of stdout")
        sp.set_defaults(func=cmd_stego, stego_op=op)

    p = sub.add_parser("features", help="stylometric feature CSV from a dataset or text")
    _common_flags(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="in_path", help="dataset CSV (label,text)")
    src.add_argument("--text", help="single text")
    p.add_argument("--out", help="feature CSV path (default stdout)")
    p.add_argument("--function-words", help="override the bundled function-word list")
    p.add_argument("--lemmas", help="override the bundled lemma table")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("rank", help="information-gain ranking of the five features")
    _common_flags(p)
    p.add_argument("--features", required=True, help="feature CSV produced by `features`")
    p.add_argument("--out", help="ranking CSV path (default stdout)")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("train", help="train a random-forest model on a feature CSV")
    _common_flags(p)
    p.add_argument("--features", required=True, help="labeled feature CSV")
    p.add_argument("--out", required=True, help="model JSON path")
    p.add_argument("--trees", type=int, default=32, help="number of trees (default 32)")
    p.add_argument("--max-depth", type=int, default=16)
    p.add_argument("--min-gain", type=float, default=1e-12)
    p.add_argument("--features-per-split", type=int, help="default: ceil(sqrt(d))")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="classify feature rows with a trained model")
    _common_flags(p)
    p.add_argument("--model", required=True, help="model JSON from `train`")
    p.add_argument("--features", required=True, help="feature CSV to classify")
    p.add_argument("--out", help="prediction CSV path (default stdout)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("delta", help="Burrows's Delta matrix and UPGMA dendrogram")
    _common_flags(p)
    p.add_argument("--dir", dest="directory", required=True, help="directory of *.txt documents")
    p.add_argument("--mfw", type=int, default=150, help="most-frequent-word count (default 150)")
    p.add_argument("--cull", type=float, default=0.0,
                   help="drop words present in less than this fraction of documents (default 0)")
    p.add_argument("--out", help="matrix CSV path (default stdout)")
    p.add_argument("--newick", help="dendrogram Newick path")
    p.add_argument("--json", dest="json_path", help="dendrogram JSON path")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("export-pairs", help="write paired texts under the Fig-style naming")
    _common_flags(p)
    p.add_argument("--pairs", required=True, help="paired CSV (pair_id,nanon_text,anon_text)")
    p.add_argument("--out-dir", required=True, help="target directory")
    p.set_defaults(func=cmd_export_pairs)

    p = sub.add_parser("sample-corpus", help="emit the bundled sample corpus CSV")
    _common_flags(p)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_sample_corpus)

    return parser


def _progress(args, message):
    if not getattr(args, "quiet", False):
        print(message, file=sys.stderr)


def _read_text_arg(args) -> str:
    if args.text is not None:
        return args.text
    path = Path(args.in_path)
    if not path.is_file():
        raise ConfigError(f"no such file: {path}")
    return path.read_text(encoding="utf-8")


def _write_or_print(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _pipeline_config(args) -> PipelineConfig:
    cfg = PipelineConfig()
    if args.config:
        cfg = load_config(args.config, cfg)
    if args.preset:
        cfg.steps = PRESETS[args.preset]
    cfg.master_seed = args.seed
    if getattr(args, "parallelism", None):
        cfg.parallelism = args.parallelism
    if getattr(args, "fail_fast", False):
        cfg.fail_fast = True
    if getattr(args, "payload_hex", None):
        try:
            cfg.payload = PayloadPolicy(fixed=bytes.fromhex(args.payload_hex), random_len=None)
        except ValueError:
            raise ConfigError(f"bad payload hex: {args.payload_hex!r}") from None
    elif getattr(args, "payload_random", None) is not None:
        cfg.payload = PayloadPolicy(random_len=args.payload_random)
    if cfg.parallelism < 1:
        raise ConfigError("parallelism must be >= 1")
    return cfg


def cmd_run(args) -> int:
    from .pipeline import run_corpus

    cfg = _pipeline_config(args)
    if args.text is not None:
        docs = [Document("text_00001", args.text)]
    else:
        records = import_csv(args.in_path)
        check_unique_ids(records)
        docs = [Document(rec.text_id, rec.text) for rec in records]

    results = run_corpus(docs, cfg)
    failed = [r for r in results if not r.ok]

    if args.out:
        rows = []
        for doc, result in zip(docs, results):
            rows.append(LabeledRecord(f"{doc.id}_nanon", 0, doc.text))
            if result.ok:
                rows.append(LabeledRecord(f"{doc.id}_anon", 1, result.final_text))
        from .corpus import export_csv
        export_csv(rows, args.out)
    if args.pairs:
        pairs = [
            PairRecord(i + 1,
                       LabeledRecord(f"pair_{i + 1:03d}_nanon", 0, doc.text),
                       LabeledRecord(f"pair_{i + 1:03d}_anon", 1, result.final_text))
            for i, (doc, result) in enumerate(zip(docs, results))
            if result.ok
        ]
        from .corpus import export_pairs_csv
        export_pairs_csv(pairs, args.pairs)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8", newline="") as fh:
            for result in results:
                fh.write(json.dumps(result.to_json(), ensure_ascii=False, sort_keys=True))
                fh.write("\n")
    if args.text is not None and not (args.out or args.pairs):
        result = results[0]
        if result.ok:
            _write_or_print(result.final_text, None)

    for result in failed:
        print(f"error: {result.error.code}: record {result.record_id} failed at "
              f"{result.error.stage.value}: {result.error.message}", file=sys.stderr)
    _progress(args, f"processed {len(results)} record(s), {len(failed)} failed")
    return 1 if failed else 0


def cmd_stego(args) -> int:
    text = _read_text_arg(args)
    if args.stego_op == "embed":
        if args.payload_hex is not None:
            try:
                payload = bytes.fromhex(args.payload_hex)
            except ValueError:
                raise ConfigError(f"bad payload hex: {args.payload_hex!r}") from None
        else:
            path = Path(args.payload_file)
            if not path.is_file():
                raise ConfigError(f"no such file: {path}")
            payload = path.read_bytes()
        _write_or_print(embed(text, payload), args.out)
    elif args.stego_op == "extract":
        _write_or_print(extract(text).hex(), args.out)
    else:
        _write_or_print(strip(text), args.out)
    return 0


def _load_lexicons_for(args):
    from .textcore import FunctionWordList, LemmaTable, bundled_path

    fw_path = getattr(args, "function_words", None) or bundled_path("lexicons", "function_words.txt")
    lm_path = getattr(args, "lemmas", None) or bundled_path("lexicons", "lemmas.tsv")
    return FunctionWordList.load(fw_path), LemmaTable.load(lm_path)


def cmd_features(args) -> int:
    fwl, lemmas = _load_lexicons_for(args)
    mode = TokenMode(args.mode)
    if args.text is not None:
        vectors = [extract_features(Document("text_00001", args.text), mode, fwl, lemmas)]
    else:
        records = import_csv(args.in_path)
        vectors = [
            extract_features(Document(rec.text_id, rec.text), mode, fwl, lemmas, label=rec.label)
            for rec in records
        ]
    if args.out:
        write_feature_csv(vectors, args.out)
    else:
        write_feature_csv(vectors, sys.stdout)
    _progress(args, f"extracted features for {len(vectors)} document(s)")
    return 0


def _ranking_csv(ranked) -> str:
    lines = ["feature,gain_bits,threshold,verdict"]
    for r in ranked:
        threshold = repr(float(r.threshold)) if r.threshold == r.threshold else ""
        lines.append(f"{r.name},{r.gain_bits:.4f},{threshold},{r.verdict}")
    return "\n".join(lines) + "\n"


def cmd_rank(args) -> int:
    vectors = read_feature_csv(args.features)
    matrix = LabeledMatrix.from_feature_vectors(vectors)
    ranked = rank_features(matrix)
    _write_or_print(_ranking_csv(ranked), args.out)
    return 0


def cmd_train(args) -> int:
    vectors = read_feature_csv(args.features)
    matrix = LabeledMatrix.from_feature_vectors(vectors)
    model = train_forest(
        matrix, n_trees=args.trees, features_per_split=args.features_per_split,
        seed=args.seed, max_depth=args.max_depth, min_gain=args.min_gain,
    )
    save_model(model, args.out)
    _progress(args, f"trained {args.trees} tree(s) on {len(vectors)} row(s) -> {args.out}")
    return 0


def cmd_classify(args) -> int:
    model = load_model(args.model)
    vectors = read_feature_csv(args.features)
    lines = ["text_id,prediction"]
    correct = 0
    labeled = 0
    for v in vectors:
        label = predict(model, list(v.values()))
        lines.append(f"{v.text_id},{label}")
        if v.label is not None:
            labeled += 1
            correct += int(label == v.label)
    _write_or_print("\n".join(lines) + "\n", args.out)
    if labeled:
        _progress(args, f"accuracy on {labeled} labeled row(s): {correct / labeled:.4f}")
    return 0


def cmd_delta(args) -> int:
    directory = Path(args.directory)
    if not directory.is_dir():
        raise ConfigError(f"no such directory: {directory}")
    paths = sorted(directory.glob("*.txt"))
    if len(paths) < 2:
        raise ConfigError(f"need at least 2 *.txt files in {directory}")
    docs = [Document(p.name, p.read_text(encoding="utf-8")) for p in paths]
    matrix = delta_matrix(docs, args.mfw, cull=args.cull)
    tree = upgma(matrix)
    if args.out:
        write_matrix_csv(matrix, args.out)
    else:
        write_matrix_csv(matrix, sys.stdout)
    if args.newick:
        with open(args.newick, "w", encoding="utf-8", newline="") as fh:
            fh.write(to_newick(tree) + "\n")
    if args.json_path:
        with open(args.json_path, "w", encoding="utf-8", newline="") as fh:
            json.dump(tree_to_json(tree), fh, indent=2, sort_keys=True)
            fh.write("\n")
    _progress(args, f"delta over {len(docs)} document(s), {args.mfw} MFW requested")
    return 0


def cmd_export_pairs(args) -> int:
    pairs = import_pairs_csv(args.pairs)
    written = export_pairs(pairs, args.out_dir)
    _progress(args, f"wrote {len(written)} file(s) to {args.out_dir}")
    return 0


def cmd_sample_corpus(args) -> int:
    from .textcore import bundled_path

    text = bundled_path("data", "sample_corpus.csv").read_text(encoding="utf-8")
    _write_or_print(text, args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        print("error: usage: missing subcommand", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 2
    except StylocloakError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

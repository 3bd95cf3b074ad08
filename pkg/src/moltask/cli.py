"""Command-line surface for batch pipelines.

Subcommands: parse, scaffold, fragments, tokenize, corrupt,
build-corpus, split, audit-split, eval, grid.  Line-oriented commands
stream record by record (memory bounded by batch size, not file size),
never abort on bad records (structured error lines instead), and write a
manifest echoing the fully resolved configuration next to each output.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .parser import parse_smiles
from .registry import FragmentRegistry, default_registry, fragment_profile
from .scaffold import murcko_scaffold, scaffold_key
from .splitter import FOLDS, scaffold_split
from .taskgen import (
    LabelVocabulary, Record, apply_corruption, build_corpus,
    plan_corruption, record_seed,
)
from .tokenizer import tokenize
from .writer import write_smiles
from .evalkit import (
    corpus_bleu, exact_match_accuracy, f1_score, label_probabilities,
    pr_auc, read_sidecar, read_tensor, roc_auc, significance_grid,
    word_error_rate,
)

_SMILES_COLUMNS = ("smiles", "SMILES", "Smiles")
_ID_COLUMNS = ("source_id", "id", "ID", "mol_id", "name")


class CliError(Exception):
    """Configuration or I/O failure: exit code 2."""


# ---------------------------------------------------------------------------
# shared I/O helpers

def _open_output(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _write_manifest(output_path: str, command: str, config: dict) -> None:
    if output_path == "-":
        return
    manifest = {
        "tool": "moltask",
        "version": __version__,
        "command": command,
        "config": config,
    }
    with open(output_path + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _iter_smiles_lines(path: str):
    """Yield (source_id, smiles) from plain text or CSV/TSV input."""
    if path.endswith((".csv", ".tsv")):
        for rec in _iter_csv_records(path)[0]:
            yield rec.source_id, rec.smiles
        return
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh):
            yield f"line{lineno + 1}", line.strip()


def _iter_csv_records(path: str, label_columns: str = "auto",
                      missing_labels: str = "negative"):
    """Read CSV/TSV rows into Records; returns (records, label names).

    Label cells: 1-ish marks active, 0-ish inactive, empty missing.  In
    ``drop`` mode records with any missing label are excluded.
    """
    delim = "\t" if path.endswith(".tsv") else ","
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter=delim)
        if reader.fieldnames is None:
            raise CliError(f"{path}: empty CSV")
        smiles_col = next(
            (c for c in reader.fieldnames if c in _SMILES_COLUMNS), None
        )
        if smiles_col is None:
            raise CliError(f"{path}: no smiles column")
        id_col = next((c for c in reader.fieldnames if c in _ID_COLUMNS), None)
        if label_columns == "auto":
            label_cols = [
                c for c in reader.fieldnames
                if c != smiles_col and c != id_col
            ]
        elif label_columns:
            label_cols = [c.strip() for c in label_columns.split(",")]
            for c in label_cols:
                if c not in reader.fieldnames:
                    raise CliError(f"{path}: no column {c!r}")
        else:
            label_cols = []
        label_names = [LabelVocabulary.sanitize(c) for c in label_cols]
        records = []
        for rownum, row in enumerate(reader):
            source_id = row[id_col] if id_col else f"row{rownum + 1}"
            active = []
            missing = False
            for col, name in zip(label_cols, label_names):
                cell = (row.get(col) or "").strip()
                if cell == "":
                    missing = True
                elif cell in ("1", "1.0", "true", "True"):
                    active.append(name)
            if missing and missing_labels == "drop":
                continue
            records.append(Record(source_id, row[smiles_col].strip(),
                                  tuple(active)))
    return records, label_names


def _load_registry(args) -> FragmentRegistry:
    path = getattr(args, "registry", None) or os.environ.get(
        "MOLTASK_REGISTRY"
    )
    if path:
        return FragmentRegistry.from_file(path)
    return default_registry()


def _map_ordered(fn, items, threads: int):
    """Order-preserving map, optionally over a worker pool."""
    if threads <= 1:
        for item in items:
            yield fn(item)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        yield from pool.map(fn, items)


def _line_command(args, command: str, per_line, config: dict) -> int:
    """Shared driver for parse/scaffold/fragments/tokenize/corrupt.

    Bad records become structured error lines; the exit code stays 0.
    """
    out, close = _open_output(args.output)
    try:
        items = enumerate(_iter_smiles_lines(args.input))

        def safe(pair):
            index, (source_id, text) = pair
            try:
                return per_line(index, source_id, text)
            except Exception as exc:
                return json.dumps(
                    {"source_id": source_id, "error": str(exc)},
                    sort_keys=True,
                )

        for line in _map_ordered(safe, items, args.threads):
            out.write(line + "\n")
    finally:
        if close:
            out.close()
    _write_manifest(args.output, command, config)
    return 0


# ---------------------------------------------------------------------------
# subcommands

def _cmd_parse(args) -> int:
    def per_line(index, source_id, text):
        mol = parse_smiles(text)
        return json.dumps({
            "source_id": source_id,
            "smiles": write_smiles(mol),
            "heavy_atoms": mol.heavy_atom_count(),
            "bonds": len(mol.bonds),
            "rings": [len(r) for r in mol.rings],
        }, sort_keys=True)

    return _line_command(args, "parse", per_line, _config(args))


def _cmd_scaffold(args) -> int:
    as_json = args.format == "json"

    def per_line(index, source_id, text):
        smiles = murcko_scaffold(parse_smiles(text)).scaffold_smiles
        if as_json:
            return json.dumps(
                {"source_id": source_id, "scaffold": smiles}, sort_keys=True
            )
        return smiles

    return _line_command(args, "scaffold", per_line, _config(args))


def _cmd_fragments(args) -> int:
    registry = _load_registry(args)
    as_json = args.format == "json"

    def per_line(index, source_id, text):
        names = fragment_profile(parse_smiles(text), registry)
        if as_json:
            return json.dumps(
                {"source_id": source_id, "fragments": names}, sort_keys=True
            )
        return " ".join(names)

    return _line_command(args, "fragments", per_line, _config(args))


def _cmd_tokenize(args) -> int:
    def per_line(index, source_id, text):
        return tokenize(text).text()

    return _line_command(args, "tokenize", per_line, _config(args))


def _cmd_corrupt(args) -> int:
    def per_line(index, source_id, text):
        tokens = tokenize(text)
        plan = plan_corruption(
            tokens, args.mask_rate, record_seed(args.seed, index)
        )
        inp, tgt = apply_corruption(tokens, plan)
        return json.dumps({
            "source_id": source_id,
            "input": inp.text(),
            "target": tgt.text(),
        }, sort_keys=True)

    return _line_command(args, "corrupt", per_line, _config(args))


def _cmd_build_corpus(args) -> int:
    registry = _load_registry(args)
    tasks = [t.strip() for t in args.tasks.split(",") if t.strip()]
    if args.input.endswith((".csv", ".tsv")):
        records, label_names = _iter_csv_records(
            args.input, args.label_columns, args.missing_labels
        )
    else:
        records = [
            Record(source_id, smiles)
            for source_id, smiles in _iter_smiles_lines(args.input)
        ]
        label_names = []
    vocab = LabelVocabulary(tuple(label_names)) if label_names else None
    stream, report = build_corpus(
        records, tasks, rate=args.mask_rate, seed=args.seed,
        registry=registry, vocab=vocab, prefixed=args.prefix,
        threads=args.threads,
    )
    out, close = _open_output(args.output)
    try:
        for example in stream:
            out.write(json.dumps(example.to_json(), sort_keys=True) + "\n")
    finally:
        if close:
            out.close()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    _write_manifest(args.output, "build-corpus", _config(args))
    return 0


def _parse_seeds(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(s) for s in text.split(",") if s.strip() != ""]


def _parse_fractions(text: str) -> tuple[float, float, float]:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 3:
        raise CliError("--fractions needs three comma-separated numbers")
    return tuple(parts)  # type: ignore[return-value]


def _cmd_split(args) -> int:
    seeds = _parse_seeds(args.seeds) if args.seeds else [args.seed]
    fractions = _parse_fractions(args.fractions)
    pairs = list(_iter_smiles_lines(args.input))
    per_seed_files = "{seed}" in args.output
    rows_written = 0
    handles = {}
    warnings: list[str] = []
    excluded: list = []
    try:
        for seed in seeds:
            assignment = scaffold_split(
                pairs, fractions=fractions, seed=seed, ordering=args.ordering
            )
            warnings.extend(assignment.warnings)
            excluded = assignment.excluded  # identical across seeds
            path = (
                args.output.replace("{seed}", str(seed))
                if per_seed_files else args.output
            )
            if path not in handles:
                fh, close = _open_output(path)
                handles[path] = (fh, close)
                fh.write("source_id,fold,seed\n")
            fh = handles[path][0]
            for source_id, _ in pairs:
                fold = assignment.assignment.get(source_id)
                if fold is None:
                    continue
                fh.write(f"{source_id},{fold},{seed}\n")
                rows_written += 1
    finally:
        for fh, close in handles.values():
            if close:
                fh.close()
    for w in sorted(set(warnings)):
        print(f"warning: {w}", file=sys.stderr)
    for path in handles:
        _write_manifest(path, "split", _config(args))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump({
                "seeds": seeds,
                "rows": rows_written,
                "excluded": excluded,
                "warnings": sorted(set(warnings)),
            }, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def _cmd_audit_split(args) -> int:
    pairs = list(_iter_smiles_lines(args.input))
    keys = {}
    for source_id, smiles in pairs:
        try:
            keys[source_id] = scaffold_key(smiles)
        except Exception:
            continue
    by_seed: dict[str, dict[str, set]] = {}
    with open(args.splits, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            seed = row.get("seed", "0")
            fold = row["fold"]
            source_id = row["source_id"]
            if source_id not in keys:
                continue
            by_seed.setdefault(seed, {f: set() for f in FOLDS})[fold].add(
                keys[source_id]
            )
    report = {"seeds": {}, "total_overlaps": 0}
    for seed, folds in sorted(by_seed.items()):
        overlaps = {}
        for a, b in (("train", "valid"), ("train", "test"), ("valid", "test")):
            n = len(folds.get(a, set()) & folds.get(b, set()))
            overlaps[f"{a}|{b}"] = n
            report["total_overlaps"] += n
        report["seeds"][seed] = overlaps
    out, close = _open_output(args.output)
    try:
        json.dump(report, out, indent=2, sort_keys=True)
        out.write("\n")
    finally:
        if close:
            out.close()
    _write_manifest(args.output, "audit-split", _config(args))
    return 0 if report["total_overlaps"] == 0 else 1


def _read_token_lines(path: str) -> list[list[str]]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n").split() for line in fh]


def _cmd_eval(args) -> int:
    results: dict[str, float] = {}
    if args.candidates and args.references:
        cands = _read_token_lines(args.candidates)
        refs = _read_token_lines(args.references)
        results["bleu"] = corpus_bleu(cands, refs)
        results["word_error_rate"] = word_error_rate(cands, refs)
        results["exact_match"] = exact_match_accuracy(
            [" ".join(c) for c in cands], [" ".join(r) for r in refs]
        )
    elif args.logits and args.sidecar and args.truth:
        import numpy as np

        logits = read_tensor(args.logits)
        names, ids = read_sidecar(args.sidecar)
        probs = label_probabilities(logits, ids)
        truths = _read_truth_csv(args.truth, names, probs.shape[0])
        if len(names) == 1:
            results["f1"] = f1_score(
                probs[:, 0], truths[:, 0], args.threshold, "binary"
            )
        else:
            results["f1_micro"] = f1_score(
                probs, truths, args.threshold, "micro"
            )
            results["f1_macro"] = f1_score(
                probs, truths, args.threshold, "macro"
            )
        results["roc_auc"] = roc_auc(probs, truths)
        results["pr_auc"] = pr_auc(probs, truths)
        if args.probabilities:
            with open(args.probabilities, "w", encoding="utf-8") as fh:
                fh.write(",".join(names) + "\n")
                for row in probs:
                    fh.write(",".join(f"{p:.8g}" for p in row) + "\n")
    else:
        raise CliError(
            "eval needs --candidates/--references or "
            "--logits/--sidecar/--truth"
        )
    out, close = _open_output(args.output)
    try:
        if args.format == "json":
            json.dump(results, out, indent=2, sort_keys=True)
            out.write("\n")
        else:
            out.write("metric,value\n")
            for name in sorted(results):
                out.write(f"{name},{results[name]:.8g}\n")
    finally:
        if close:
            out.close()
    _write_manifest(args.output, "eval", _config(args))
    return 0


def _read_truth_csv(path: str, names: list[str], expected_rows: int):
    import numpy as np

    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        sanitized = {LabelVocabulary.sanitize(c): c for c in fields}
        missing = [n for n in names if n not in sanitized]
        if missing:
            raise CliError(f"{path}: missing truth columns {missing}")
        rows = []
        for row in reader:
            vals = []
            for n in names:
                cell = (row.get(sanitized[n]) or "").strip()
                vals.append(float("nan") if cell == "" else float(cell))
            rows.append(vals)
    truths = np.asarray(rows, dtype=np.float64)
    if truths.shape[0] != expected_rows:
        raise CliError(
            f"{path}: {truths.shape[0]} rows but logits have {expected_rows}"
        )
    return truths


def _cmd_grid(args) -> int:
    from .evalkit import MetricReport

    scores: dict[str, list[float]] = {}
    with open(args.scores, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            scores.setdefault(row["model"], []).append(float(row["score"]))
    grid = significance_grid(scores, alpha=args.alpha)
    out, close = _open_output(args.output)
    try:
        writer = csv.writer(out)
        writer.writerows(grid.to_rows())
    finally:
        if close:
            out.close()
    if args.plot_data:
        payload = grid.to_plot_data()
        payload["reports"] = {
            model: MetricReport.from_scores("score", scores[model]).to_json()
            for model in grid.models
        }
        with open(args.plot_data, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    if args.summary:
        with open(args.summary, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["model", "folds", "median", "iqr"])
            for model in grid.models:
                report = MetricReport.from_scores("score", scores[model])
                writer.writerow([
                    model, len(report.scores),
                    f"{report.median:.6g}", f"{report.iqr:.6g}",
                ])
    _write_manifest(args.output, "grid", _config(args))
    return 0


# ---------------------------------------------------------------------------
# argument parsing

def _config(args) -> dict:
    return {
        k: v for k, v in sorted(vars(args).items())
        if k != "func" and v is not None
    }


def _add_common_io(p, threads: bool = True) -> None:
    p.add_argument("input", help="input file (text: one SMILES per line; "
                                 ".csv/.tsv: needs a smiles column)")
    p.add_argument("-o", "--output", default="-",
                   help="output path ('-' for stdout)")
    if threads:
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads (output order is unchanged)")


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="moltask",
        description="Molecular text-to-text task corpora and evaluation.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse SMILES, report graph summary")
    _add_common_io(p)
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("scaffold", help="Murcko scaffold per line")
    _add_common_io(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_scaffold)

    p = sub.add_parser("fragments", help="fragment presence profile per line")
    _add_common_io(p)
    p.add_argument("--registry", help="registry file (name<TAB>smarts)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_fragments)

    p = sub.add_parser("tokenize", help="space-separated token stream")
    _add_common_io(p)
    p.set_defaults(func=_cmd_tokenize)

    p = sub.add_parser("corrupt", help="span corruption input/target pairs")
    _add_common_io(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mask-rate", type=float, default=0.15)
    p.set_defaults(func=_cmd_corrupt)

    p = sub.add_parser("build-corpus", help="emit task examples as JSONL")
    _add_common_io(p)
    p.add_argument("--tasks", default="combined",
                   help="comma list: mlm,scaffold,fragments,labels,combined")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mask-rate", type=float, default=0.15)
    p.add_argument("--registry")
    p.add_argument("--prefix", action="store_true",
                   help="prepend task tokens to single-task inputs")
    p.add_argument("--label-columns", default="auto")
    p.add_argument("--missing-labels", choices=("negative", "drop"),
                   default="negative")
    p.add_argument("--report", help="write a build report JSON here")
    p.set_defaults(func=_cmd_build_corpus)

    p = sub.add_parser("split", help="seeded scaffold split to fold CSVs")
    _add_common_io(p, threads=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", help="e.g. '0..9' or '0,1,2'")
    p.add_argument("--fractions", default="0.8,0.1,0.1")
    p.add_argument("--ordering", choices=("shuffle", "size"),
                   default="shuffle")
    p.add_argument("--report", help="write a split report JSON here")
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("audit-split", help="verify zero scaffold leakage")
    _add_common_io(p, threads=False)
    p.add_argument("--splits", required=True, help="fold CSV to audit")
    p.set_defaults(func=_cmd_audit_split)

    p = sub.add_parser("eval", help="sequence or classification metrics")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--candidates", help="candidate token lines")
    p.add_argument("--references", help="reference token lines")
    p.add_argument("--logits", help="binary logits container")
    p.add_argument("--sidecar", help="label sidecar JSON")
    p.add_argument("--truth", help="truth CSV with label columns")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--probabilities",
                   help="also write per-record label probabilities CSV")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("grid", help="pairwise one-sided significance grid")
    p.add_argument("--scores", required=True,
                   help="CSV with model,fold,score columns")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--plot-data", help="write plot-data JSON here")
    p.add_argument("--summary", help="write per-model median/IQR CSV here")
    p.set_defaults(func=_cmd_grid)

    return ap


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

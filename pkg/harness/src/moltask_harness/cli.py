"""Command-line surface: train, embed, export-logits, rf."""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .embed import embed_smiles
from .export import export_logits, write_container, write_label_sidecar
from .model import ModelShape
from .rfc import load_split_csv, rf_classify
from .train import load_checkpoint, train


def _shape_from_args(args) -> ModelShape:
    if args.preset != "custom":
        return ModelShape.from_preset(args.preset)
    return ModelShape(args.embedding_size, args.num_layers,
                      args.num_heads, args.feed_forward_size)


def _cmd_train(args) -> int:
    result = train(
        args.corpus, _shape_from_args(args), steps=args.steps,
        seed=args.seed, out_dir=args.out_dir, device=args.device,
        log_every=args.log_every,
        target_exact_match=args.target_exact_match,
    )
    print(json.dumps({
        "checkpoint": result.checkpoint_path,
        "initial_exact_match": result.initial_exact_match,
        "final_exact_match": result.final_exact_match,
    }, indent=2))
    return 0


def _read_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip()]


def _cmd_embed(args) -> int:
    model, vocab, _ = load_checkpoint(args.checkpoint, args.device)
    texts = _read_lines(args.input)
    matrix = embed_smiles(model, texts, vocab, args.device)
    write_container(args.output, matrix.astype(np.float32))
    print(f"wrote {matrix.shape[0]}x{matrix.shape[1]} embeddings "
          f"to {args.output}")
    return 0


def _cmd_export_logits(args) -> int:
    model, vocab, _ = load_checkpoint(args.checkpoint, args.device)
    texts = _read_lines(args.input)
    tensor = export_logits(
        model, texts, vocab, args.output, device=args.device,
        max_steps=args.max_steps,
    )
    if args.sidecar:
        labels = [s.strip() for s in args.labels.split(",") if s.strip()]
        write_label_sidecar(args.sidecar, labels, vocab)
    print(f"wrote logits {tensor.shape} to {args.output}")
    return 0


def _cmd_rf(args) -> int:
    from .export import read_container

    embeddings = read_container(args.embeddings)
    with open(args.labels, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    labels = np.array([int(float(r["label"])) for r in rows])
    fold_map = load_split_csv(args.splits, seed=args.seed)
    fold_of = [fold_map[r["source_id"]] for r in rows]
    result = rf_classify(embeddings, labels, fold_of, seed=args.seed,
                         with_permutation_baseline=args.baseline)
    print(json.dumps({
        "f1": result.fold_f1, "permutation_f1": result.permutation_f1,
    }, indent=2))
    return 0


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="moltask-harness",
        description="Toy encoder-decoder training over moltask corpora.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train on a JSONL corpus")
    p.add_argument("corpus")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--preset", default="toy",
                   choices=("toy", "small", "base", "xl", "custom"))
    p.add_argument("--embedding-size", type=int, default=64)
    p.add_argument("--num-layers", type=int, default=2)
    p.add_argument("--num-heads", type=int, default=4)
    p.add_argument("--feed-forward-size", type=int, default=256)
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--device", default="cpu")
    p.add_argument("--log-every", type=int, default=200)
    p.add_argument("--target-exact-match", type=float)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("embed", help="pooled embeddings for token lines")
    p.add_argument("input", help="one space-tokenized sequence per line")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--device", default="cpu")
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("export-logits",
                       help="greedy-decode logits container")
    p.add_argument("input", help="one space-tokenized sequence per line")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--sidecar", help="write a label sidecar JSON here")
    p.add_argument("--labels", default="", help="comma list of label tokens")
    p.add_argument("--max-steps", type=int, default=16)
    p.add_argument("--device", default="cpu")
    p.set_defaults(func=_cmd_export_logits)

    p = sub.add_parser("rf", help="random forest over embeddings")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--labels", required=True,
                   help="CSV with source_id,label columns")
    p.add_argument("--splits", required=True, help="fold CSV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--baseline", action="store_true",
                   help="also fit a label-permutation baseline")
    p.set_defaults(func=_cmd_rf)

    return ap


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

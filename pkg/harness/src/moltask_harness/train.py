"""Training loop, checkpointing, and greedy-decode evaluation.

Optimizer and schedule defaults are fixed here and never silently
changed; direction-of-effect (loss falls, held-out exact match rises
above the untrained baseline) is the contract, not specific numbers.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

import torch
from torch import nn

from .data import iter_batches, load_corpus, make_batch, split_examples
from .model import ModelShape, Seq2SeqModel
from .vocab import Vocab

DEFAULTS = {
    "learning_rate": 3e-4,
    "batch_size": 128,
    "holdout_fraction": 0.1,
    "dropout": 0.1,
    "max_decode_steps": 32,
    "eval_batch_size": 256,
}


@dataclass
class TrainResult:
    checkpoint_path: str
    log: list
    final_exact_match: float
    initial_exact_match: float


def save_checkpoint(path, model: Seq2SeqModel, vocab: Vocab, config: dict):
    torch.save({
        "state_dict": model.state_dict(),
        "vocab": list(vocab.tokens),
        "shape": model.shape.to_json(),
        "max_len": model.max_len,
        "config": config,
    }, path)


def load_checkpoint(path, device: str = "cpu") -> tuple[Seq2SeqModel, Vocab, dict]:
    payload = torch.load(path, map_location=device, weights_only=False)
    vocab = Vocab(tuple(payload["vocab"]))
    shape_info = dict(payload["shape"])
    shape = ModelShape(
        embedding_size=shape_info["embedding_size"],
        num_layers=shape_info["num_layers"],
        num_heads=shape_info["num_heads"],
        feed_forward_size=shape_info["feed_forward_size"],
        preset=shape_info.get("preset", "toy"),
    )
    model = Seq2SeqModel(len(vocab), shape, max_len=payload["max_len"],
                         dropout=payload["config"].get("dropout", 0.1))
    model.load_state_dict(payload["state_dict"])
    model.to(device)
    model.eval()
    return model, vocab, payload["config"]


@torch.no_grad()
def exact_match(model: Seq2SeqModel, examples, vocab: Vocab,
                device: str = "cpu", batch_size: int = 256,
                max_steps: int = 32) -> float:
    """Fraction of held-out examples whose greedy decode reproduces the
    target text exactly."""
    model.eval()
    hits = 0
    for start in range(0, len(examples), batch_size):
        chunk = examples[start:start + batch_size]
        batch = make_batch(chunk, vocab).to(device)
        ids, _ = model.greedy_decode(
            batch.src, batch.src_pad, vocab.bos_id, vocab.eos_id,
            max_steps=max_steps,
        )
        for ex, row in zip(chunk, ids.tolist()):
            decoded = vocab.decode(row)
            if decoded == ex.target_tokens:
                hits += 1
    return hits / len(examples)


def train(corpus_path, shape: ModelShape, steps: int, seed: int,
          out_dir, device: str = "cpu", log_every: int = 200,
          target_exact_match: float | None = None,
          overrides: dict | None = None) -> TrainResult:
    """Train on a JSONL corpus; returns the checkpoint path and log.

    ``target_exact_match`` stops early once the held-out bar is met
    (checked at each evaluation point).
    """
    config = dict(DEFAULTS)
    config.update(overrides or {})
    config.update({
        "corpus": str(corpus_path), "steps": steps, "seed": seed,
        "shape": shape.to_json(), "device": device,
    })

    torch.manual_seed(seed)
    examples = load_corpus(corpus_path)
    vocab = Vocab.build(
        [" ".join(ex.input_tokens) + " " + " ".join(ex.target_tokens)
         for ex in examples]
    )
    train_set, holdout = split_examples(
        examples, config["holdout_fraction"], seed
    )

    model = Seq2SeqModel(len(vocab), shape, dropout=config["dropout"])
    model.to(device)
    optimizer = torch.optim.Adam(model.parameters(),
                                 lr=config["learning_rate"])
    loss_fn = nn.CrossEntropyLoss(ignore_index=vocab.pad_id)

    initial_em = exact_match(
        model, holdout, vocab, device, config["eval_batch_size"],
        config["max_decode_steps"],
    )
    log = [{"step": 0, "val_exact_match": initial_em}]

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    checkpoint_path = out_dir / "checkpoint.pt"

    step = 0
    epoch = 0
    start_time = time.time()
    running = 0.0
    running_n = 0
    final_em = initial_em
    stop = steps == 0
    while not stop:
        epoch += 1
        for batch in iter_batches(train_set, vocab, config["batch_size"],
                                  seed + epoch):
            model.train()
            batch = batch.to(device)
            logits = model(batch.src, batch.src_pad, batch.tgt_in)
            loss = loss_fn(
                logits.reshape(-1, logits.shape[-1]),
                batch.tgt_out.reshape(-1),
            )
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            running += loss.detach().item()
            running_n += 1
            step += 1
            if step % log_every == 0 or step >= steps:
                final_em = exact_match(
                    model, holdout, vocab, device,
                    config["eval_batch_size"], config["max_decode_steps"],
                )
                log.append({
                    "step": step,
                    "train_loss": running / max(running_n, 1),
                    "val_exact_match": final_em,
                    "elapsed_s": round(time.time() - start_time, 1),
                })
                running = 0.0
                running_n = 0
                if target_exact_match is not None \
                        and final_em >= target_exact_match:
                    stop = True
            if step >= steps:
                stop = True
            if stop:
                break

    save_checkpoint(checkpoint_path, model, vocab, config)
    with open(out_dir / "train_log.json", "w", encoding="utf-8") as fh:
        json.dump(log, fh, indent=2)
        fh.write("\n")
    return TrainResult(str(checkpoint_path), log, final_em, initial_em)

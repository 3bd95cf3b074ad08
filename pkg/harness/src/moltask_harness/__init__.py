"""Toy encoder-decoder harness over moltask corpora: training,
embedding extraction, logits export, and random-forest evaluation."""

from .model import ModelShape, Seq2SeqModel
from .vocab import Vocab, is_special_for_pooling
from .data import Example, load_corpus, make_batch, split_examples
from .train import exact_match, load_checkpoint, save_checkpoint, train
from .embed import embed_smiles, embed_token_lists
from .export import (
    export_logits, read_container, write_container, write_label_sidecar,
)
from .rfc import rf_classify, load_split_csv

__version__ = "0.1.0"

__all__ = [
    "ModelShape", "Seq2SeqModel", "Vocab", "is_special_for_pooling",
    "Example", "load_corpus", "make_batch", "split_examples",
    "train", "exact_match", "save_checkpoint", "load_checkpoint",
    "embed_smiles", "embed_token_lists",
    "export_logits", "read_container", "write_container",
    "write_label_sidecar", "rf_classify", "load_split_csv",
]

"""Pretraining and finetuning corpus construction.

Tasks: span corruption over token streams (``mlm``), scaffold targets,
fragment-presence targets, the combined prefixed task pair, and
label-to-text targets.  Corpus builds are deterministic: every record
draws its randomness from a stable hash of (seed, record index), so the
output is byte-identical regardless of worker count or platform.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

from .registry import FragmentRegistry, default_registry, fragment_profile
from .parser import parse_smiles
from .scaffold import murcko_scaffold
from .tokenizer import TokenSequence, detokenize, sentinel_token, tokenize

__all__ = [
    "TaskExample", "CorruptionPlan", "LabelVocabulary", "BuildReport",
    "plan_corruption", "apply_corruption", "make_mlm_example",
    "make_scaffold_example", "make_fragments_example", "make_label_example",
    "build_corpus", "record_seed", "TASKS",
]

TASKS = ("mlm", "scaffold", "fragments", "labels", "combined")


@dataclass(frozen=True)
class TaskExample:
    task: str
    input_text: str
    target_text: str
    source_id: str

    def to_json(self) -> dict:
        return {
            "task": self.task,
            "input": self.input_text,
            "target": self.target_text,
            "source_id": self.source_id,
        }


@dataclass(frozen=True)
class CorruptionPlan:
    """Disjoint, sorted, non-adjacent masked spans with their sentinels."""

    spans: tuple[tuple[int, int], ...]  # (start token index, length)
    sentinel_ids: tuple[int, ...]
    n_tokens: int

    def __post_init__(self):
        prev_end = None
        for (start, length), sid in zip(self.spans, self.sentinel_ids, strict=True):
            if length < 1 or start < 0 or start + length > self.n_tokens:
                raise ValueError(f"span {(start, length)} out of range")
            if prev_end is not None and start <= prev_end:
                raise ValueError("spans must be sorted and non-adjacent")
            prev_end = start + length
        if list(self.sentinel_ids) != list(range(len(self.spans))):
            raise ValueError("sentinel ids must count up from 0")

    @property
    def masked_tokens(self) -> int:
        return sum(length for _, length in self.spans)


class LabelError(ValueError):
    pass


@dataclass(frozen=True)
class LabelVocabulary:
    """Ordered label tokens for one benchmark."""

    labels: tuple[str, ...]

    def __post_init__(self):
        seen = set()
        for lab in self.labels:
            if not lab:
                raise LabelError("empty label")
            if lab in seen:
                raise LabelError(f"duplicate label {lab!r}")
            if " " in lab or "\t" in lab:
                raise LabelError(f"label {lab!r} contains whitespace")
            toks = tokenize(lab).tokens
            if len(toks) == 1 and toks[0] == lab:
                # The tokenizer already assigns this word a meaning
                # (SMILES atom, sentinel, task prefix, fragment name).
                raise LabelError(
                    f"label {lab!r} collides with an existing token class"
                )
            seen.add(lab)

    def __iter__(self):
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    @staticmethod
    def sanitize(name: str) -> str:
        """Normalize a raw column name into a single label token."""
        out = "".join(
            ch if ch.isalnum() or ch == "_" else "_" for ch in name.strip()
        ).strip("_").lower()
        return out or "label"

    @classmethod
    def from_columns(cls, names) -> "LabelVocabulary":
        return cls(tuple(cls.sanitize(n) for n in names))


def record_seed(seed: int, index: int) -> int:
    """Stable 64-bit per-record seed, independent of platform hashing."""
    digest = hashlib.blake2b(
        f"{seed}:{index}".encode(), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big")


def plan_corruption(tokens, rate: float, rng_seed: int) -> CorruptionPlan:
    """Sample masked positions and merge adjacent ones into spans.

    ``round(rate * n)`` distinct positions are drawn uniformly without
    replacement; consecutive positions collapse into a single span.
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError("rate must be within [0, 1]")
    toks = list(tokens)
    n = len(toks)
    k = int(rate * n + 0.5)
    if k == 0:
        return CorruptionPlan((), (), n)
    rng = random.Random(rng_seed)
    positions = sorted(rng.sample(range(n), k))
    spans: list[tuple[int, int]] = []
    start = positions[0]
    length = 1
    for p in positions[1:]:
        if p == start + length:
            length += 1
        else:
            spans.append((start, length))
            start, length = p, 1
    spans.append((start, length))
    return CorruptionPlan(
        tuple(spans), tuple(range(len(spans))), n
    )


def apply_corruption(tokens, plan: CorruptionPlan):
    """Replace each span by its sentinel; emit the masked spans as the
    target, terminated by one final sentinel.

    Returns ``(input_tokens, target_tokens)``.
    """
    toks = list(tokens)
    if plan.n_tokens != len(toks):
        raise ValueError("plan was built for a different token count")
    out: list[str] = []
    target: list[str] = []
    pos = 0
    for (start, length), sid in zip(plan.spans, plan.sentinel_ids):
        out.extend(toks[pos:start])
        out.append(sentinel_token(sid))
        target.append(sentinel_token(sid))
        target.extend(toks[start:start + length])
        pos = start + length
    out.extend(toks[pos:])
    target.append(sentinel_token(len(plan.spans)))
    return TokenSequence(tuple(out)), TokenSequence(tuple(target))


def make_mlm_example(smiles: str, rate: float, rng_seed: int,
                     source_id: str = "") -> TaskExample:
    tokens = tokenize(smiles)
    plan = plan_corruption(tokens, rate, rng_seed)
    inp, tgt = apply_corruption(tokens, plan)
    return TaskExample("mlm", inp.text(), tgt.text(), source_id)


def make_scaffold_example(smiles: str, prefixed: bool = False,
                          source_id: str = "") -> TaskExample:
    scaffold_smiles = murcko_scaffold(parse_smiles(smiles)).scaffold_smiles
    input_text = detokenize(tokenize(smiles).tokens)
    if prefixed:
        input_text = f"scaffold: {input_text}"
    target = detokenize(tokenize(scaffold_smiles).tokens)
    return TaskExample("scaffold", input_text, target, source_id)


def make_fragments_example(smiles: str, prefixed: bool = False,
                           registry: FragmentRegistry | None = None,
                           source_id: str = "") -> TaskExample:
    registry = registry or default_registry()
    names = fragment_profile(parse_smiles(smiles), registry)
    input_text = detokenize(tokenize(smiles).tokens)
    if prefixed:
        input_text = f"fragments: {input_text}"
    return TaskExample("fragments", input_text, " ".join(names), source_id)


def make_label_example(smiles: str, active_labels, vocab: LabelVocabulary,
                       task_prefixed: bool = False,
                       source_id: str = "") -> TaskExample:
    active = set(active_labels)
    unknown = active - set(vocab.labels)
    if unknown:
        raise LabelError(f"labels not in vocabulary: {sorted(unknown)}")
    target = " ".join(lab for lab in vocab.labels if lab in active)
    input_text = detokenize(tokenize(smiles).tokens)
    if task_prefixed:
        input_text = f"labels: {input_text}"
    return TaskExample("labels", input_text, target, source_id)


@dataclass
class Record:
    """One dataset row: an identifier, a SMILES string, and optionally
    the set of active labels."""

    source_id: str
    smiles: str
    active_labels: tuple[str, ...] = ()


@dataclass
class BuildReport:
    total: int = 0
    parsed: int = 0
    failed: int = 0
    emitted: int = 0
    per_task: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def record_failure(self, source_id: str, error: str) -> None:
        self.failed += 1
        self.failures.append({"source_id": source_id, "error": error})

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "parsed": self.parsed,
            "failed": self.failed,
            "emitted": self.emitted,
            "per_task": dict(self.per_task),
            "failures": list(self.failures),
        }


def build_corpus(records, tasks, rate: float = 0.15, seed: int = 0,
                 registry: FragmentRegistry | None = None,
                 vocab: LabelVocabulary | None = None,
                 prefixed: bool = False, threads: int = 1):
    """Build task examples for a record stream.

    Returns ``(generator, report)``; the report is complete once the
    generator is exhausted.  The ``combined`` task emits the prefixed
    scaffold and fragments pair per molecule.  Record-level failures are
    logged and never abort the stream.  With ``threads > 1`` records are
    processed by a worker pool but emitted in input order, and per-record
    seeding keeps the output byte-identical at any thread count.
    """
    task_list = [tasks] if isinstance(tasks, str) else list(tasks)
    for t in task_list:
        if t not in TASKS:
            raise ValueError(f"unknown task {t!r}; expected one of {TASKS}")
    if "labels" in task_list and vocab is None:
        raise LabelError("the labels task needs a label vocabulary")
    registry = registry or default_registry()
    report = BuildReport()

    def process(pair):
        index, rec = pair
        try:
            return rec, _record_examples(
                rec, task_list, rate, record_seed(seed, index), registry,
                vocab, prefixed,
            ), None
        except Exception as exc:  # record-level: log and continue
            return rec, None, str(exc)

    def generate():
        items = enumerate(records)
        if threads <= 1:
            mapped = map(process, items)
            pool = None
        else:
            from concurrent.futures import ThreadPoolExecutor

            pool = ThreadPoolExecutor(max_workers=threads)
            mapped = pool.map(process, items)
        try:
            for rec, examples, error in mapped:
                report.total += 1
                if error is not None:
                    report.record_failure(rec.source_id, error)
                    continue
                report.parsed += 1
                for ex in examples:
                    report.emitted += 1
                    report.per_task[ex.task] = (
                        report.per_task.get(ex.task, 0) + 1
                    )
                    yield ex
        finally:
            if pool is not None:
                pool.shutdown()

    return generate(), report


def _record_examples(rec: Record, task_list, rate, rseed, registry, vocab,
                     prefixed) -> list[TaskExample]:
    out: list[TaskExample] = []
    # Parse once so a bad SMILES fails the whole record up front.
    mol = parse_smiles(rec.smiles)
    tokens = tokenize(rec.smiles)
    base_text = tokens.text()
    for task in task_list:
        if task == "mlm":
            plan = plan_corruption(tokens, rate, rseed)
            inp, tgt = apply_corruption(tokens, plan)
            out.append(TaskExample("mlm", inp.text(), tgt.text(), rec.source_id))
        elif task == "scaffold":
            target = detokenize(
                tokenize(murcko_scaffold(mol).scaffold_smiles).tokens
            )
            text = f"scaffold: {base_text}" if prefixed else base_text
            out.append(TaskExample("scaffold", text, target, rec.source_id))
        elif task == "fragments":
            target = " ".join(fragment_profile(mol, registry))
            text = f"fragments: {base_text}" if prefixed else base_text
            out.append(TaskExample("fragments", text, target, rec.source_id))
        elif task == "combined":
            scaffold_target = detokenize(
                tokenize(murcko_scaffold(mol).scaffold_smiles).tokens
            )
            out.append(TaskExample(
                "scaffold", f"scaffold: {base_text}", scaffold_target,
                rec.source_id,
            ))
            out.append(TaskExample(
                "fragments", f"fragments: {base_text}",
                " ".join(fragment_profile(mol, registry)), rec.source_id,
            ))
        elif task == "labels":
            out.append(make_label_example(
                rec.smiles, rec.active_labels, vocab,
                task_prefixed=prefixed, source_id=rec.source_id,
            ))
    return out

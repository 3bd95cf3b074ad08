"""The named fragment-descriptor registry and presence profiles.

A registry is an ordered list of (name, SMARTS) patterns; profile output
order always equals registry order.  The built-in default embeds the
standard 85-descriptor set; a custom registry loads from a text file
with one ``name<TAB>smarts[<TAB>description]`` line per entry (``#``
comments allowed).  The environment variable ``MOLTASK_REGISTRY``
overrides the default path.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources

from .matching import has_match, match_count, match_view
from .mol import Molecule
from .smarts import SmartsPattern, parse_smarts

__all__ = ["FragmentPattern", "FragmentRegistry", "fragment_profile",
           "fragment_counts", "default_registry"]


@dataclass(frozen=True)
class FragmentPattern:
    """One named descriptor with its source SMARTS kept verbatim."""

    name: str
    smarts: str
    pattern: SmartsPattern
    description: str = ""


class RegistryError(ValueError):
    pass


class FragmentRegistry:
    """Immutable ordered collection of fragment patterns."""

    def __init__(self, entries: list[FragmentPattern]):
        names = [e.name for e in entries]
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise RegistryError(f"duplicate fragment names: {sorted(dupes)}")
        self.entries: tuple[FragmentPattern, ...] = tuple(entries)
        self._by_name = {e.name: e for e in entries}

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, name: str) -> FragmentPattern:
        return self._by_name[name]

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries)

    @classmethod
    def from_lines(cls, lines, source: str = "<memory>") -> "FragmentRegistry":
        entries = []
        for lineno, raw in enumerate(lines, start=1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise RegistryError(
                    f"{source}:{lineno}: expected name<TAB>smarts"
                )
            name, smarts = parts[0].strip(), parts[1].strip()
            description = parts[2].strip() if len(parts) > 2 else ""
            try:
                pattern = parse_smarts(smarts)
            except ValueError as exc:
                raise RegistryError(
                    f"{source}:{lineno}: cannot parse {name}: {exc}"
                ) from exc
            entries.append(FragmentPattern(name, smarts, pattern, description))
        if not entries:
            raise RegistryError(f"{source}: registry is empty")
        return cls(entries)

    @classmethod
    def from_file(cls, path: str) -> "FragmentRegistry":
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh, source=path)


_default: FragmentRegistry | None = None


def default_registry() -> FragmentRegistry:
    """The built-in registry, or the ``MOLTASK_REGISTRY`` override."""
    global _default
    override = os.environ.get("MOLTASK_REGISTRY")
    if override:
        return FragmentRegistry.from_file(override)
    if _default is None:
        text = (
            resources.files("moltask.data")
            .joinpath("fragment_registry.tsv")
            .read_text(encoding="utf-8")
        )
        _default = FragmentRegistry.from_lines(
            text.splitlines(), source="fragment_registry.tsv"
        )
    return _default


def fragment_profile(mol: Molecule, registry: FragmentRegistry | None = None) -> list[str]:
    """Names of the registry fragments present in the molecule, in
    registry order."""
    registry = registry or default_registry()
    match_view(mol)  # build shared features once
    return [e.name for e in registry.entries if has_match(mol, e.pattern)]


def fragment_counts(mol: Molecule, registry: FragmentRegistry | None = None) -> dict[str, int]:
    """Distinct-atom-set match counts for every registry fragment."""
    registry = registry or default_registry()
    match_view(mol)
    return {e.name: match_count(mol, e.pattern) for e in registry.entries}

"""Backtracking subgraph-isomorphism matching of SMARTS patterns.

Candidates are generated most-constrained-query-atom-first from the
pattern's precomputed plan; per-molecule atom features are computed once
and shared across patterns, and recursive-SMARTS evaluations are
memoized per molecule.  Matches that differ only by an automorphism of
the query (same atom set) count once.
"""

from __future__ import annotations

from . import smarts as _smarts_mod
from .mol import ATOMIC_NUMBER, Molecule

__all__ = ["MatchView", "match_view", "has_match", "match_count",
           "find_matches", "match_rooted"]


class MatchView:
    """Flat per-molecule arrays consumed by compiled SMARTS predicates."""

    __slots__ = (
        "n", "symbol", "atomic_num", "aromatic", "charge", "degree",
        "total_h", "connections", "valence", "ring_count", "ring_sizes",
        "adj", "border", "ring_bond_set", "pair_bond", "buckets",
        "element_set", "recursive_memo",
    )

    def __init__(self, mol: Molecule):
        n = len(mol.atoms)
        self.n = n
        self.symbol = tuple(a.element for a in mol.atoms)
        self.atomic_num = tuple(
            ATOMIC_NUMBER.get(a.element, 0) for a in mol.atoms
        )
        self.aromatic = tuple(a.aromatic for a in mol.atoms)
        self.charge = tuple(a.formal_charge for a in mol.atoms)
        self.degree = tuple(mol.degree(i) for i in range(n))
        self.total_h = tuple(mol.implicit_h(i) for i in range(n))
        self.connections = tuple(
            self.degree[i] + self.total_h[i] for i in range(n)
        )
        self.valence = tuple(
            int(mol.bond_order_sum(i)) + self.total_h[i] for i in range(n)
        )
        counts, sizes, ring_bonds = mol.ring_membership()
        self.ring_count = counts
        self.ring_sizes = sizes
        self.ring_bond_set = ring_bonds
        self.adj = mol._adj
        self.border = tuple(b.order for b in mol.bonds)
        pair: dict[tuple[int, int], int] = {}
        for bidx, b in enumerate(mol.bonds):
            pair[(b.a, b.b)] = bidx
            pair[(b.b, b.a)] = bidx
        self.pair_bond = pair
        buckets: dict[str, list[int]] = {}
        for i, sym in enumerate(self.symbol):
            buckets.setdefault(sym, []).append(i)
        self.buckets = {k: tuple(v) for k, v in buckets.items()}
        self.element_set = frozenset(self.buckets)
        self.recursive_memo: dict[int, dict[int, bool]] = {}


def match_view(mol: Molecule) -> MatchView:
    """The molecule's cached feature view."""
    view = mol._cache.get("matchview")
    if view is None:
        view = mol._cache["matchview"] = MatchView(mol)
    return view


def _compatible(view: MatchView, pattern) -> bool:
    elems = view.element_set
    for req in pattern.element_requirements:
        if not (req & elems):
            return False
    return True


def _anchor_candidates(view: MatchView, query) -> tuple[int, ...]:
    if query.elements is None:
        return tuple(range(view.n))
    elems = query.elements
    if len(elems) == 1:
        for sym in elems:
            return view.buckets.get(sym, ())
    out: list[int] = []
    for sym in sorted(elems):
        out.extend(view.buckets.get(sym, ()))
    return tuple(out)


def _search(view: MatchView, pattern, collector, plans) -> bool:
    """Run the match plan; ``collector(assignment)`` returning True stops
    the search early.  Returns whether the search was stopped."""
    assignment = [-1] * len(pattern.atoms)
    used: set[int] = set()
    patoms = pattern.atoms
    pbonds = pattern.bonds
    adj = view.adj
    pair_bond = view.pair_bond
    n_plans = len(plans)

    def extend(ci: int, k: int, mapped: list[int]) -> bool:
        steps = plans[ci]
        if k == len(steps):
            if ci + 1 == n_plans:
                return collector(assignment)
            return extend(ci + 1, 0, [])
        qidx, links = steps[k]
        qfn = patoms[qidx].fn
        if not links:
            for m in _anchor_candidates(view, patoms[qidx]):
                if m in used or not qfn(view, m):
                    continue
                assignment[qidx] = m
                used.add(m)
                mapped.append(m)
                if extend(ci, k + 1, mapped):
                    return True
                mapped.pop()
                used.discard(m)
                assignment[qidx] = -1
            return False
        pivot_pos, pivot_bpos = links[0]
        pivot_bond = pbonds[pivot_bpos][2].fn
        rest = links[1:]
        for m, bidx in adj[mapped[pivot_pos]]:
            if m in used:
                continue
            if not pivot_bond(view, bidx):
                continue
            if not qfn(view, m):
                continue
            ok = True
            for opos, bpos in rest:
                b2 = pair_bond.get((m, mapped[opos]))
                if b2 is None or not pbonds[bpos][2].fn(view, b2):
                    ok = False
                    break
            if not ok:
                continue
            assignment[qidx] = m
            used.add(m)
            mapped.append(m)
            if extend(ci, k + 1, mapped):
                return True
            mapped.pop()
            used.discard(m)
            assignment[qidx] = -1
        return False

    return extend(0, 0, [])


def _search_rooted(view: MatchView, pattern, root: int) -> bool:
    """Existence check with pattern atom 0 pinned to ``root``."""
    q0 = pattern.atoms[0]
    if not q0.fn(view, root):
        return False
    if pattern.single_atom:
        return True
    plans = pattern.rooted_plans
    patoms = pattern.atoms
    pbonds = pattern.bonds
    adj = view.adj
    pair_bond = view.pair_bond
    n_plans = len(plans)
    used = {root}

    def extend(ci: int, k: int, mapped: list[int]) -> bool:
        steps = plans[ci]
        if k == len(steps):
            if ci + 1 == n_plans:
                return True
            return extend(ci + 1, 0, [])
        qidx, links = steps[k]
        qfn = patoms[qidx].fn
        if not links:
            if ci == 0 and k == 0:
                mapped.append(root)
                if extend(ci, 1, mapped):
                    return True
                mapped.pop()
                return False
            for m in _anchor_candidates(view, patoms[qidx]):
                if m in used or not qfn(view, m):
                    continue
                used.add(m)
                mapped.append(m)
                if extend(ci, k + 1, mapped):
                    return True
                mapped.pop()
                used.discard(m)
            return False
        pivot_pos, pivot_bpos = links[0]
        pivot_bond = pbonds[pivot_bpos][2].fn
        rest = links[1:]
        for m, bidx in adj[mapped[pivot_pos]]:
            if m in used:
                continue
            if not pivot_bond(view, bidx):
                continue
            if not qfn(view, m):
                continue
            ok = True
            for opos, bpos in rest:
                b2 = pair_bond.get((m, mapped[opos]))
                if b2 is None or not pbonds[bpos][2].fn(view, b2):
                    ok = False
                    break
            if not ok:
                continue
            used.add(m)
            mapped.append(m)
            if extend(ci, k + 1, mapped):
                return True
            mapped.pop()
            used.discard(m)
        return False

    return extend(0, 0, [])


_sentinel_true = lambda assignment: True  # noqa: E731


def has_match(mol: Molecule, pattern) -> bool:
    """True when at least one embedding of the pattern exists."""
    view = match_view(mol)
    if view.n == 0 or not _compatible(view, pattern):
        return False
    if pattern.single_atom:
        qfn = pattern.atoms[0].fn
        for m in _anchor_candidates(view, pattern.atoms[0]):
            if qfn(view, m):
                return True
        return False
    return _search(view, pattern, _sentinel_true, pattern.plans)


def match_rooted(view: MatchView, pattern, atom: int) -> bool:
    """True when an embedding maps pattern atom 0 onto ``atom``."""
    return _search_rooted(view, pattern, atom)


def find_matches(mol: Molecule, pattern,
                 uniquify: bool = True) -> list[tuple[int, ...]]:
    """All embeddings as tuples in pattern-atom order.

    With ``uniquify`` (the default) only one embedding per distinct
    molecule-atom set is kept.
    """
    view = match_view(mol)
    if view.n == 0 or not _compatible(view, pattern):
        return []
    out: list[tuple[int, ...]] = []
    seen: set[frozenset[int]] = set()

    def collect(assignment) -> bool:
        match = tuple(assignment)
        if uniquify:
            key = frozenset(match)
            if key in seen:
                return False
            seen.add(key)
        out.append(match)
        return False

    _search(view, pattern, collect, pattern.plans)
    return out


def match_count(mol: Molecule, pattern) -> int:
    """Number of distinct matched atom sets."""
    view = match_view(mol)
    if view.n == 0 or not _compatible(view, pattern):
        return 0
    seen: set[frozenset[int]] = set()

    def collect(assignment) -> bool:
        seen.add(frozenset(assignment))
        return False

    _search(view, pattern, collect, pattern.plans)
    return len(seen)


# Late-bind the rooted matcher used by recursive-SMARTS predicates.
_smarts_mod._match_rooted = match_rooted

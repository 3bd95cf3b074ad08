"""SMARTS parsing for the fragment-descriptor dialect.

Supported atom primitives: element symbols (aliphatic uppercase,
aromatic lowercase), atomic number ``#n``, wildcards ``*``/``a``/``A``,
total hydrogens ``Hn``, connections ``Xn``, degree ``Dn``, valence
``vn``, ring membership ``R``/``Rn``, ring size ``r``/``rn``, charges,
and recursive environments ``$(...)`` (anchored at their first atom,
nesting capped at four).  Connectives follow standard precedence:
``!`` binds tightest, then ``&`` or juxtaposition, then ``,``, then
``;``.  Bond expressions support ``- = # : ~ @`` plus the same
connectives.  Queries compile to plain predicate closures so matching
stays cheap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .mol import ATOMIC_NUMBER, KNOWN_ELEMENTS

__all__ = [
    "SmartsParseError", "UnsupportedSmartsError", "AtomQuery", "BondQuery",
    "SmartsPattern", "parse_smarts",
]

MAX_RECURSION_DEPTH = 4

_pattern_uid = itertools.count()

# Rebound to matching.match_rooted when moltask.matching is imported;
# avoids a circular module import on the hot predicate path.
_match_rooted = None


class SmartsParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


class UnsupportedSmartsError(SmartsParseError):
    """A primitive outside the supported dialect subset."""


@dataclass(frozen=True)
class AtomQuery:
    """Compiled boolean atom expression."""

    fn: object  # callable(view, atom_index) -> bool
    elements: frozenset | None  # possible symbols, None when unknown
    score: int  # selectivity estimate, higher = more constrained
    cost: int  # evaluation cost estimate

    def __call__(self, view, idx) -> bool:
        return self.fn(view, idx)


@dataclass(frozen=True)
class BondQuery:
    fn: object  # callable(view, bond_index) -> bool

    def __call__(self, view, bidx) -> bool:
        return self.fn(view, bidx)


@dataclass
class SmartsPattern:
    """A parsed query graph with a precomputed match plan."""

    smarts: str
    atoms: list[AtomQuery]
    bonds: list[tuple[int, int, BondQuery]]
    components: list[list[int]] = field(default_factory=list)
    adj: list[list[tuple[int, int]]] = field(default_factory=list)
    plans: tuple = ()
    rooted_plans: tuple = ()
    element_requirements: tuple = ()
    single_atom: bool = False
    uid: int = field(default_factory=lambda: next(_pattern_uid))

    def finalize(self) -> "SmartsPattern":
        n = len(self.atoms)
        self.adj = [[] for _ in range(n)]
        for bpos, (a, b, _) in enumerate(self.bonds):
            self.adj[a].append((b, bpos))
            self.adj[b].append((a, bpos))
        comp = [-1] * n
        self.components = []
        for seed in range(n):
            if comp[seed] >= 0:
                continue
            cid = len(self.components)
            members = [seed]
            comp[seed] = cid
            stack = [seed]
            while stack:
                u = stack.pop()
                for v, _ in self.adj[u]:
                    if comp[v] < 0:
                        comp[v] = cid
                        members.append(v)
                        stack.append(v)
            self.components.append(sorted(members))
        self.plans = tuple(self._plan(m) for m in self.components)
        # Recursive-SMARTS anchoring pins pattern atom 0, which needs a
        # plan whose first step is atom 0 itself.
        root_component = comp[0]
        rooted = self._plan(self.components[root_component], anchor=0)
        self.rooted_plans = (rooted,) + tuple(
            p for c, p in enumerate(self.plans) if c != root_component
        )
        # Every query atom with a known element set needs at least one of
        # those elements present in the molecule; cheap no-match filter.
        self.element_requirements = tuple(
            {q.elements for q in self.atoms if q.elements is not None}
        )
        self.single_atom = n == 1
        return self

    def _plan(self, members: list[int], anchor: int | None = None):
        """Visit order: most-constrained first, then connected expansion.

        Each step carries the list of (order position of an already
        mapped neighbor, bond position) constraints; the first entry is
        the pivot whose molecule neighborhood supplies candidates.
        """
        remaining = set(members)
        order: list[int] = []
        pos_of: dict[int, int] = {}
        steps: list[tuple[int, list[tuple[int, int]]]] = []
        if anchor is None:
            anchor = max(remaining, key=lambda i: (self.atoms[i].score, -i))
        order.append(anchor)
        pos_of[anchor] = 0
        remaining.remove(anchor)
        steps.append((anchor, []))
        while remaining:
            frontier = [
                i for i in remaining
                if any(nbr in pos_of for nbr, _ in self.adj[i])
            ]
            pool = frontier or sorted(remaining)
            nxt = max(pool, key=lambda i: (self.atoms[i].score, -i))
            links = [
                (pos_of[nbr], bpos)
                for nbr, bpos in self.adj[nxt]
                if nbr in pos_of
            ]
            links.sort()
            pos_of[nxt] = len(order)
            order.append(nxt)
            remaining.remove(nxt)
            steps.append((nxt, links))
        return steps


# ---------------------------------------------------------------------------
# predicate constructors

def _true(view, i) -> bool:
    return True


def _and_fns(fns):
    if len(fns) == 1:
        return fns[0]
    if len(fns) == 2:
        f, g = fns
        return lambda v, i: f(v, i) and g(v, i)
    if len(fns) == 3:
        f, g, h = fns
        return lambda v, i: f(v, i) and g(v, i) and h(v, i)
    fns = tuple(fns)

    def _all(v, i):
        for f in fns:
            if not f(v, i):
                return False
        return True

    return _all


def _or_fns(fns):
    if len(fns) == 1:
        return fns[0]
    if len(fns) == 2:
        f, g = fns
        return lambda v, i: f(v, i) or g(v, i)
    fns = tuple(fns)

    def _any(v, i):
        for f in fns:
            if f(v, i):
                return True
        return False

    return _any


def _combine_and(queries: list[AtomQuery]) -> AtomQuery:
    if len(queries) == 1:
        return queries[0]
    elements = None
    for q in queries:
        if q.elements is not None:
            elements = q.elements if elements is None else elements & q.elements
    ordered = sorted(queries, key=lambda q: q.cost)
    return AtomQuery(
        fn=_and_fns([q.fn for q in ordered]),
        elements=elements,
        score=sum(q.score for q in queries),
        cost=sum(q.cost for q in queries),
    )


def _combine_or(queries: list[AtomQuery]) -> AtomQuery:
    if len(queries) == 1:
        return queries[0]
    elements: frozenset | None = frozenset()
    for q in queries:
        if q.elements is None:
            elements = None
            break
        elements = elements | q.elements
    return AtomQuery(
        fn=_or_fns([q.fn for q in queries]),
        elements=elements,
        score=min(q.score for q in queries),
        cost=sum(q.cost for q in queries),
    )


def _negate(q: AtomQuery) -> AtomQuery:
    f = q.fn
    return AtomQuery(
        fn=lambda v, i: not f(v, i), elements=None, score=1, cost=q.cost
    )


# ---------------------------------------------------------------------------
# parser

class _Cursor:
    __slots__ = ("text", "pos")

    def __init__(self, text: str, pos: int = 0):
        self.text = text
        self.pos = pos

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def digits(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return self.text[start:self.pos]


_AROMATIC_ORGANIC = {"b": "B", "c": "C", "n": "N", "o": "O", "p": "P", "s": "S"}
_AROMATIC_TWO = {"se": "Se", "as": "As"}
# Letters reserved for query primitives inside brackets; two-letter
# element readings starting with these are rejected (use #n instead).
_PRIMITIVE_LETTERS = frozenset("DHRXrv")


def _element_queries(symbol: str, aromatic: bool | None) -> AtomQuery:
    if aromatic is None:
        z = ATOMIC_NUMBER[symbol]
        return AtomQuery(
            fn=lambda v, i, z=z: v.atomic_num[i] == z,
            elements=frozenset({symbol}), score=4, cost=0,
        )
    if aromatic:
        fn = lambda v, i, s=symbol: v.aromatic[i] and v.symbol[i] == s
    else:
        fn = lambda v, i, s=symbol: not v.aromatic[i] and v.symbol[i] == s
    return AtomQuery(fn=fn, elements=frozenset({symbol}), score=5, cost=0)


def _parse_recursive(cur: _Cursor, depth: int) -> AtomQuery:
    if depth >= MAX_RECURSION_DEPTH:
        raise UnsupportedSmartsError(
            f"recursive SMARTS nested deeper than {MAX_RECURSION_DEPTH}",
            cur.pos,
        )
    if cur.peek() != "(":
        raise SmartsParseError("expected '(' after '$'", cur.pos)
    start = cur.pos + 1
    level = 0
    i = cur.pos
    text = cur.text
    while i < len(text):
        if text[i] == "(":
            level += 1
        elif text[i] == ")":
            level -= 1
            if level == 0:
                break
        i += 1
    if level != 0:
        raise SmartsParseError("unbalanced '(' in recursive SMARTS", cur.pos)
    inner = text[start:i]
    cur.pos = i + 1
    sub = _parse_pattern(inner, depth + 1)
    if not sub.atoms:
        raise SmartsParseError("empty recursive SMARTS", start)
    anchor_elements = sub.atoms[0].elements

    if sub.single_atom:
        anchor_fn = sub.atoms[0].fn
        return AtomQuery(fn=anchor_fn, elements=anchor_elements, score=3,
                         cost=sub.atoms[0].cost)

    def fn(view, idx, sub=sub):
        memo = view.recursive_memo.get(sub.uid)
        if memo is None:
            memo = view.recursive_memo[sub.uid] = {}
        hit = memo.get(idx)
        if hit is None:
            # bound by moltask.matching at import time
            hit = memo[idx] = _match_rooted(view, sub, idx)
        return hit

    return AtomQuery(fn=fn, elements=anchor_elements, score=3, cost=10)


def _parse_atom_primitive(cur: _Cursor, depth: int) -> AtomQuery:
    ch = cur.peek()
    pos = cur.pos
    if ch == "$":
        cur.take()
        return _parse_recursive(cur, depth)
    if ch == "#":
        cur.take()
        digits = cur.digits()
        if not digits:
            raise SmartsParseError("'#' needs an atomic number", pos)
        z = int(digits)
        symbol = None
        for sym, num in ATOMIC_NUMBER.items():
            if num == z:
                symbol = sym
                break
        if symbol is None:
            raise SmartsParseError(f"no element with atomic number {z}", pos)
        return _element_queries(symbol, aromatic=None)
    if ch == "*":
        cur.take()
        return AtomQuery(fn=_true, elements=None, score=0, cost=0)
    if ch == "a":
        nxt = cur.text[cur.pos:cur.pos + 2]
        if nxt == "as":
            cur.pos += 2
            return _element_queries("As", aromatic=True)
        cur.take()
        return AtomQuery(
            fn=lambda v, i: v.aromatic[i], elements=None, score=1, cost=0
        )
    if cur.text[cur.pos:cur.pos + 2] == "se":
        cur.pos += 2
        return _element_queries("Se", aromatic=True)
    if ch == "A":
        two = cur.text[cur.pos:cur.pos + 2]
        if len(two) == 2 and two[1].islower() and two in KNOWN_ELEMENTS:
            cur.pos += 2
            return _element_queries(two, aromatic=False)
        cur.take()
        return AtomQuery(
            fn=lambda v, i: not v.aromatic[i], elements=None, score=1, cost=0
        )
    if ch in _AROMATIC_ORGANIC:
        cur.take()
        return _element_queries(_AROMATIC_ORGANIC[ch], aromatic=True)
    if ch == "H":
        cur.take()
        digits = cur.digits()
        h = int(digits) if digits else 1
        return AtomQuery(
            fn=lambda v, i, h=h: v.total_h[i] == h,
            elements=None, score=2, cost=1,
        )
    if ch == "D":
        cur.take()
        digits = cur.digits()
        d = int(digits) if digits else 1
        return AtomQuery(
            fn=lambda v, i, d=d: v.degree[i] == d,
            elements=None, score=2, cost=1,
        )
    if ch == "X":
        cur.take()
        digits = cur.digits()
        x = int(digits) if digits else 1
        return AtomQuery(
            fn=lambda v, i, x=x: v.connections[i] == x,
            elements=None, score=2, cost=1,
        )
    if ch == "v":
        cur.take()
        digits = cur.digits()
        val = int(digits) if digits else 1
        return AtomQuery(
            fn=lambda v, i, val=val: v.valence[i] == val,
            elements=None, score=2, cost=1,
        )
    if ch == "R":
        cur.take()
        digits = cur.digits()
        if not digits:
            return AtomQuery(
                fn=lambda v, i: v.ring_count[i] > 0,
                elements=None, score=1, cost=1,
            )
        r = int(digits)
        if r == 0:
            return AtomQuery(
                fn=lambda v, i: v.ring_count[i] == 0,
                elements=None, score=1, cost=1,
            )
        return AtomQuery(
            fn=lambda v, i, r=r: v.ring_count[i] == r,
            elements=None, score=2, cost=1,
        )
    if ch == "r":
        cur.take()
        digits = cur.digits()
        if not digits:
            return AtomQuery(
                fn=lambda v, i: v.ring_count[i] > 0,
                elements=None, score=1, cost=1,
            )
        size = int(digits)
        return AtomQuery(
            fn=lambda v, i, size=size: size in v.ring_sizes[i],
            elements=None, score=2, cost=1,
        )
    if ch in "+-":
        cur.take()
        if cur.peek() == ch:  # '++' / '--'
            cur.take()
            charge = 2 if ch == "+" else -2
        else:
            digits = cur.digits()
            mag = int(digits) if digits else 1
            charge = mag if ch == "+" else -mag
        return AtomQuery(
            fn=lambda v, i, c=charge: v.charge[i] == c,
            elements=None, score=2, cost=1,
        )
    if ch.isupper():
        two = cur.text[cur.pos:cur.pos + 2]
        if (
            len(two) == 2
            and two[1].islower()
            and two in KNOWN_ELEMENTS
            and two[0] not in _PRIMITIVE_LETTERS
        ):
            cur.pos += 2
            return _element_queries(two, aromatic=False)
        if ch in KNOWN_ELEMENTS:
            cur.take()
            return _element_queries(ch, aromatic=False)
    if ch == "@":
        raise UnsupportedSmartsError("chirality queries are unsupported", pos)
    if ch.isdigit():
        raise UnsupportedSmartsError("isotope queries are unsupported", pos)
    raise SmartsParseError(f"unexpected {ch!r} in atom expression", pos)


def _parse_atom_expr(cur: _Cursor, depth: int, stop: str = "]") -> AtomQuery:
    def parse_unary() -> AtomQuery:
        if cur.peek() == "!":
            cur.take()
            return _negate(parse_unary())
        return _parse_atom_primitive(cur, depth)

    def parse_and() -> AtomQuery:
        terms = [parse_unary()]
        while True:
            ch = cur.peek()
            if ch == "&":
                cur.take()
                terms.append(parse_unary())
            elif ch and ch not in ",;" and ch != stop:
                terms.append(parse_unary())
            else:
                break
        return _combine_and(terms)

    def parse_or() -> AtomQuery:
        terms = [parse_and()]
        while cur.peek() == ",":
            cur.take()
            terms.append(parse_and())
        return _combine_or(terms)

    terms = [parse_or()]
    while cur.peek() == ";":
        cur.take()
        terms.append(parse_or())
    return _combine_and(terms)


_BOND_SIMPLE = {
    "-": lambda v, b: v.border[b] == 1,
    "=": lambda v, b: v.border[b] == 2,
    "#": lambda v, b: v.border[b] == 3,
    ":": lambda v, b: v.border[b] == 4,
    "~": lambda v, b: True,
    "@": lambda v, b: b in v.ring_bond_set,
    "/": lambda v, b: v.border[b] == 1,
    "\\": lambda v, b: v.border[b] == 1,
}

_BOND_CHARS = set("-=#:~@/\\!&,;")


def _default_bond(v, b) -> bool:
    return v.border[b] == 1 or v.border[b] == 4


DEFAULT_BOND = BondQuery(fn=_default_bond)


def _parse_bond_expr(cur: _Cursor) -> BondQuery | None:
    if cur.peek() not in _BOND_CHARS:
        return None
    start = cur.pos

    def parse_unary():
        ch = cur.peek()
        if ch == "!":
            cur.take()
            inner = parse_unary()
            return lambda v, b, f=inner: not f(v, b)
        if ch in _BOND_SIMPLE:
            cur.take()
            return _BOND_SIMPLE[ch]
        raise SmartsParseError(f"unexpected {ch!r} in bond expression", cur.pos)

    def parse_and():
        terms = [parse_unary()]
        while True:
            ch = cur.peek()
            if ch == "&":
                cur.take()
                terms.append(parse_unary())
            elif ch in _BOND_SIMPLE or ch == "!":
                terms.append(parse_unary())
            else:
                break
        if len(terms) == 1:
            return terms[0]
        terms = tuple(terms)

        def _all(v, b):
            for f in terms:
                if not f(v, b):
                    return False
            return True

        return _all

    def parse_or():
        terms = [parse_and()]
        while cur.peek() == ",":
            cur.take()
            terms.append(parse_and())
        if len(terms) == 1:
            return terms[0]
        terms = tuple(terms)

        def _any(v, b):
            for f in terms:
                if f(v, b):
                    return True
            return False

        return _any

    terms = [parse_or()]
    while cur.peek() == ";":
        cur.take()
        terms.append(parse_or())
    if len(terms) == 1:
        fn = terms[0]
    else:
        terms = tuple(terms)

        def fn(v, b):
            for f in terms:
                if not f(v, b):
                    return False
            return True

    if cur.pos == start:
        return None
    return BondQuery(fn=fn)


def _parse_pattern(text: str, depth: int = 0) -> SmartsPattern:
    cur = _Cursor(text)
    atoms: list[AtomQuery] = []
    bonds: list[tuple[int, int, BondQuery]] = []
    prev: int | None = None
    pending: BondQuery | None = None
    branch_stack: list[int | None] = []
    open_rings: dict[int, tuple[int, BondQuery | None, int]] = {}

    def add_atom(q: AtomQuery) -> None:
        nonlocal prev, pending
        atoms.append(q)
        idx = len(atoms) - 1
        if prev is not None:
            bonds.append((prev, idx, pending or DEFAULT_BOND))
        prev = idx
        pending = None

    def close_ring(num: int, pos: int) -> None:
        nonlocal pending
        if prev is None:
            raise SmartsParseError("ring closure before any atom", pos)
        if num in open_rings:
            other, o_bond, _ = open_rings.pop(num)
            if other == prev:
                raise SmartsParseError(
                    f"ring closure {num} bonds an atom to itself", pos
                )
            bonds.append((other, prev, pending or o_bond or DEFAULT_BOND))
        else:
            open_rings[num] = (prev, pending, pos)
        pending = None

    while cur.pos < len(cur.text):
        ch = cur.peek()
        pos = cur.pos
        if ch == "[":
            cur.take()
            q = _parse_atom_expr(cur, depth)
            if cur.peek() != "]":
                raise SmartsParseError("expected ']'", cur.pos)
            cur.take()
            add_atom(q)
            continue
        if ch == "(":
            if prev is None:
                raise SmartsParseError("branch before any atom", pos)
            cur.take()
            branch_stack.append(prev)
            continue
        if ch == ")":
            if not branch_stack:
                raise SmartsParseError("unmatched ')'", pos)
            cur.take()
            prev = branch_stack.pop()
            continue
        if ch.isdigit():
            cur.take()
            close_ring(int(ch), pos)
            continue
        if ch == "%":
            cur.take()
            two = cur.text[cur.pos:cur.pos + 2]
            if len(two) != 2 or not two.isdigit():
                raise SmartsParseError("'%' needs two digits", pos)
            cur.pos += 2
            close_ring(int(two), pos)
            continue
        if ch == ".":
            if depth:
                raise UnsupportedSmartsError(
                    "'.' inside recursive SMARTS is unsupported", pos
                )
            cur.take()
            prev = None
            continue
        if ch in _BOND_CHARS:
            pending = _parse_bond_expr(cur)
            if cur.peek() == "" or cur.peek() in ").":
                raise SmartsParseError("dangling bond expression", pos)
            continue
        # bare atom outside brackets
        if ch == "*":
            cur.take()
            add_atom(AtomQuery(fn=_true, elements=None, score=0, cost=0))
            continue
        if ch == "a":
            cur.take()
            add_atom(AtomQuery(
                fn=lambda v, i: v.aromatic[i], elements=None, score=1, cost=0
            ))
            continue
        if ch == "A":
            cur.take()
            add_atom(AtomQuery(
                fn=lambda v, i: not v.aromatic[i], elements=None, score=1, cost=0
            ))
            continue
        if ch in _AROMATIC_ORGANIC:
            cur.take()
            add_atom(_element_queries(_AROMATIC_ORGANIC[ch], aromatic=True))
            continue
        two = cur.text[cur.pos:cur.pos + 2]
        if two in ("Cl", "Br"):
            cur.pos += 2
            add_atom(_element_queries(two, aromatic=False))
            continue
        if ch in "BCNOPSFI":
            cur.take()
            add_atom(_element_queries(ch, aromatic=False))
            continue
        raise SmartsParseError(f"unexpected character {ch!r}", pos)

    if branch_stack:
        raise SmartsParseError("unclosed '('", len(text))
    if pending is not None:
        raise SmartsParseError("dangling bond expression", len(text) - 1)
    if open_rings:
        num, (_, _, pos) = min(open_rings.items(), key=lambda kv: kv[1][2])
        raise SmartsParseError(f"unclosed ring closure {num}", pos)
    if not atoms:
        raise SmartsParseError("empty SMARTS", 0)
    return SmartsPattern(smarts=text, atoms=atoms, bonds=bonds).finalize()


def parse_smarts(pattern: str) -> SmartsPattern:
    """Parse a SMARTS string into a compiled query graph."""
    return _parse_pattern(pattern, depth=0)

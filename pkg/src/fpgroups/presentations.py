"""Finite presentations, marked subgroups and Tietze simplification."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .words import (
    AlphabetError,
    ParseError,
    Word,
    WordParser,
    commutator,
    cyclic_reduce,
    format_word,
    is_generator_name,
    parse_word,
    substitute,
    tokenize,
)

DEFAULT_MAX_SUBST_LEN = 64
DEFAULT_MAX_MOVES = 10_000


@dataclass(frozen=True)
class Presentation:
    """Ordered generators plus cyclically reduced, nonempty relators.

    Relators are cyclically reduced on construction and empty ones dropped.
    ``metadata`` never takes part in equality.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    metadata: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        for g in gens:
            if not is_generator_name(g):
                raise ValueError(f"invalid generator name {g!r}")
        if len(set(gens)) != len(gens):
            raise ValueError(f"duplicate generator names in {gens}")
        allowed = set(gens)
        rels = []
        for r in self.relators:
            if not isinstance(r, Word):
                raise TypeError(f"relator {r!r} is not a Word")
            bad = r.symbols() - allowed
            if bad:
                raise AlphabetError(f"relator {format_word(r)} uses undeclared {sorted(bad)}")
            core, _ = cyclic_reduce(r)
            if core:
                rels.append(core)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(rels))

    @property
    def rank(self) -> int:
        return len(self.generators)

    def index(self) -> dict[str, int]:
        return {g: i for i, g in enumerate(self.generators)}

    def codes(self, w: Word) -> list[int]:
        """Letter codes: generator ``i`` is ``2i``, its inverse ``2i+1``."""
        idx = self.index()
        try:
            return [2 * idx[n] + (s < 0) for n, s in w.letters]
        except KeyError as exc:
            raise AlphabetError(f"symbol {exc.args[0]!r} not a generator") from None

    def word_from_codes(self, codes: Iterable[int]) -> Word:
        gens = self.generators
        return Word((gens[c >> 1], -1 if c & 1 else 1) for c in codes)

    def is_trivial(self) -> bool:
        """True for the presentation with no generators."""
        return not self.generators

    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)

    def canonical(self) -> "Presentation":
        """Same generators; relators in canonical form, deduplicated and sorted."""
        return Presentation(self.generators, tuple(canonical_relators(self)), dict(self.metadata))

    def __str__(self) -> str:
        return format_presentation(self)


@dataclass(frozen=True)
class MarkedSubgroup:
    """A subgroup of ``ambient`` recorded by generating words."""

    ambient: Presentation
    subgroup_generators: tuple[Word, ...]
    label: str = ""
    metadata: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        gens = tuple(self.subgroup_generators)
        allowed = set(self.ambient.generators)
        for w in gens:
            bad = w.symbols() - allowed
            if bad:
                raise AlphabetError(f"subgroup word {format_word(w)} uses {sorted(bad)}")
        object.__setattr__(self, "subgroup_generators", gens)

    def to_json(self, include_ambient: bool = False) -> dict:
        out = {"label": self.label, "generators": [format_word(w) for w in self.subgroup_generators]}
        if self.metadata:
            out["metadata"] = self.metadata
        if include_ambient:
            out["ambient"] = presentation_to_json(self.ambient)
        return out


# ---------------------------------------------------------- canonical forms


def least_rotation(seq: Sequence[int]) -> int:
    """Start index of the lexicographically least rotation (Booth's algorithm)."""
    n = len(seq)
    if n == 0:
        return 0
    s = list(seq) * 2
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def canonical_codes(codes: Sequence[int]) -> tuple[int, ...]:
    """Least rotation of the cyclic word or of its inverse."""
    if not codes:
        return ()
    inv = [c ^ 1 for c in reversed(codes)]
    k1 = least_rotation(codes)
    k2 = least_rotation(inv)
    a = tuple(codes[k1:]) + tuple(codes[:k1])
    b = tuple(inv[k2:]) + tuple(inv[:k2])
    return min(a, b)


def canonical_relator(p: Presentation, r: Word) -> Word:
    return p.word_from_codes(canonical_codes(p.codes(r)))


def canonical_relators(p: Presentation) -> list[Word]:
    """Canonical relator set: cyclic forms deduplicated up to rotation and inversion,
    sorted by length then lexicographically in generator order."""
    seen = {canonical_codes(p.codes(r)) for r in p.relators}
    seen.discard(())
    return [p.word_from_codes(c) for c in sorted(seen, key=lambda c: (len(c), c))]


def relator_set(p: Presentation) -> set[tuple[tuple[str, int], ...]]:
    """Name-based canonical relator set, comparable across presentations."""
    return {w.letters for w in canonical_relators(p)}


def digest(p: Presentation) -> str:
    payload = json.dumps(
        {"generators": list(p.generators), "relators": [format_word(r) for r in canonical_relators(p)]},
        separators=(",", ":"),
    )
    return "sha256:" + hashlib.sha256(payload.encode()).hexdigest()


# ------------------------------------------------------- parsing and output


def parse_presentation(text: str) -> Presentation:
    """Parse ``< gens | items >`` where items are relators or relations ``u = v``."""
    tokens = tokenize(text)
    parser = WordParser(tokens)
    parser.expect("<")
    gens: list[str] = []
    if parser.tok.kind != "|":
        while True:
            tok = parser.expect("name")
            if tok.text in gens:
                raise ParseError(f"generator {tok.text!r} declared twice", tok.line, tok.column)
            gens.append(tok.text)
            if parser.tok.kind == ",":
                parser.i += 1
                continue
            break
    parser.expect("|")
    parser.alphabet = set(gens)
    rels: list[Word] = []
    if parser.tok.kind != ">":
        while True:
            lhs = parser.word()
            if parser.tok.kind == "=":
                parser.i += 1
                rhs = parser.word()
                lhs = lhs * rhs.inverse()
            rels.append(lhs)
            if parser.tok.kind == ",":
                parser.i += 1
                continue
            break
    parser.expect(">")
    if parser.tok.kind != "eof":
        parser.error(f"unexpected {parser.tok.text!r} after presentation")
    return Presentation(tuple(gens), tuple(rels))


def format_presentation(p: Presentation) -> str:
    rels = ", ".join(format_word(r) for r in p.relators)
    return f"< {', '.join(p.generators)} | {rels} >"


def presentation_to_json(p: Presentation) -> dict:
    return {"generators": list(p.generators), "relators": [format_word(r) for r in p.relators]}


def presentation_from_json(obj: dict) -> Presentation:
    gens = tuple(obj["generators"])
    return Presentation(gens, tuple(parse_word(s, gens) for s in obj["relators"]))


def load_presentation(text: str) -> Presentation:
    """Accept either the text grammar or the JSON object form."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno) from None
        if "generators" not in obj:
            # rips / report files embed the presentation under a key
            for key in ("presentation", "gamma", "g"):
                if key in obj:
                    obj = obj[key]
                    break
        return presentation_from_json(obj)
    return parse_presentation(text)


# -------------------------------------------------------------------- Tietze


def _find_elimination(gens, rels, protect, max_subst_len):
    """Pick (relator index, generator, image) for one elimination move, or None.

    Shortest relator first; within a relator the latest-declared generator.
    """
    order = sorted(range(len(rels)), key=lambda i: (len(rels[i]), i))
    rank = {g: k for k, g in enumerate(gens)}
    for ri in order:
        r = rels[ri]
        if len(r) - 1 > max_subst_len:
            continue
        counts: dict[str, int] = {}
        for n, _ in r.letters:
            counts[n] = counts.get(n, 0) + 1
        once = [g for g, c in counts.items() if c == 1 and g not in protect]
        if not once:
            continue
        g = max(once, key=rank.__getitem__)
        pos = next(k for k, (n, _) in enumerate(r.letters) if n == g)
        sign = r.letters[pos][1]
        rest = Word(r.letters[pos + 1 :] + r.letters[:pos])
        # g^sign * rest = 1
        image = rest.inverse() if sign > 0 else rest
        return ri, g, image
    return None


def tietze_simplify(
    p: Presentation,
    *,
    max_moves: int = DEFAULT_MAX_MOVES,
    max_subst_len: int = DEFAULT_MAX_SUBST_LEN,
    protect: Iterable[str] = (),
) -> Presentation:
    """Simplify by Tietze moves to a fixed point.

    Drops empty and duplicate relators (up to rotation and inversion) and
    eliminates a generator occurring exactly once in some relator whose
    remaining part has length at most ``max_subst_len``.  Generators in
    ``protect`` are never eliminated.  If ``max_moves`` eliminations are used
    up while another is possible, ``metadata["incomplete"]`` is True.
    """
    protect = set(protect)
    gens = list(p.generators)
    rels = list(canonical_relators(Presentation(tuple(gens), p.relators)))
    moves = 0
    eliminated: list[str] = []
    incomplete = False
    while True:
        found = _find_elimination(gens, rels, protect, max_subst_len)
        if found is None:
            break
        if moves >= max_moves:
            incomplete = True
            break
        ri, g, image = found
        moves += 1
        eliminated.append(g)
        gens.remove(g)
        mapping = {h: Word.gen(h) for h in gens}
        mapping[g] = image
        new_rels = [substitute(r, mapping) for k, r in enumerate(rels) if k != ri]
        rels = canonical_relators(Presentation(tuple(gens), tuple(new_rels)))
    meta = dict(p.metadata)
    meta.update({"tietze_moves": moves, "eliminated": eliminated, "incomplete": incomplete})
    return Presentation(tuple(gens), tuple(rels), meta)


def quotient_by(p: Presentation, kill: Sequence[Word], **simplify_options) -> Presentation:
    """Add ``kill`` as relators, then Tietze-simplify."""
    return tietze_simplify(Presentation(p.generators, p.relators + tuple(kill)), **simplify_options)


def _fresh_name(name: str, taken: set[str]) -> str:
    k = 2
    while f"{name}_{k}" in taken:
        k += 1
    return f"{name}_{k}"


def direct_product(p: Presentation, q: Presentation) -> Presentation:
    """``p × q``: both relator sets plus every commutator ``[x, y]``, x in p, y in q.

    Clashing names in ``q`` are renamed ``name_2`` (``name_3``, ...) and the
    renaming is recorded in ``metadata["renamed"]``.
    """
    taken = set(p.generators) | set(q.generators)
    renamed: dict[str, str] = {}
    for g in q.generators:
        if g in p.generators:
            new = _fresh_name(g, taken)
            taken.add(new)
            renamed[g] = new
    qgens = tuple(renamed.get(g, g) for g in q.generators)
    rename_map = {g: Word.gen(renamed.get(g, g)) for g in q.generators}
    qrels = tuple(substitute(r, rename_map) for r in q.relators)
    comms = tuple(commutator(Word.gen(x), Word.gen(y)) for x in p.generators for y in qgens)
    return Presentation(
        p.generators + qgens,
        p.relators + qrels + comms,
        {"renamed": renamed, "factors": [list(p.generators), list(qgens)]},
    )

"""Metric small-cancellation checks and Dehn's algorithm.

Pieces are computed exactly: every cyclic word of the symmetrized relator
set is doubled into one text, and a suffix array with LCP array gives, for
each rotation, its longest common prefix with any other element.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .presentations import Presentation, least_rotation
from .words import Word, format_word

SIXTH = Fraction(1, 6)


class SmallCancellationError(ValueError):
    """Dehn's algorithm requested on a presentation that is not C'(1/6)."""


def _period(seq: Sequence[int]) -> int:
    """Smallest p with seq == seq rotated by p (p divides len(seq))."""
    n = len(seq)
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and seq[i] != seq[k]:
            k = fail[k - 1]
        if seq[i] == seq[k]:
            k += 1
        fail[i] = k
    p = n - fail[-1] if n else 0
    return p if n and n % p == 0 else n


@dataclass
class CyclicWord:
    codes: tuple[int, ...]
    relator: int  # index into the presentation's relators
    inverted: bool
    period: int

    def __len__(self):
        return len(self.codes)

    def rotation(self, offset: int) -> tuple[int, ...]:
        return self.codes[offset:] + self.codes[:offset]


@dataclass
class SymmetrizedRelatorSet:
    """All rotations of all relators and their inverses.

    Stored as distinct cyclic words; the elements are their rotations, of
    which ``period`` are distinct per word.
    """

    presentation: Presentation
    words: list[CyclicWord]

    @classmethod
    def build(cls, p: Presentation) -> "SymmetrizedRelatorSet":
        seen = {}
        words = []
        for i, r in enumerate(p.relators):
            c = tuple(p.codes(r))
            for inverted, w in ((False, c), (True, tuple(x ^ 1 for x in reversed(c)))):
                k = least_rotation(w)
                key = w[k:] + w[:k]
                if key in seen:
                    continue
                seen[key] = len(words)
                words.append(CyclicWord(w, i, inverted, _period(w)))
        return cls(p, words)

    def elements(self) -> list[Word]:
        """Every distinct element as a Word (small inputs only)."""
        out = []
        for cw in self.words:
            for k in range(cw.period):
                out.append(self.presentation.word_from_codes(cw.rotation(k)))
        return out

    def __len__(self):
        return sum(cw.period for cw in self.words)


@dataclass
class CancellationReport:
    max_piece_length: int
    min_relator_length: int
    lambda_: Fraction
    lambda_target: Fraction
    passes: bool
    passes_sixth: bool
    witness: dict | None
    per_relator: list[dict] = field(default_factory=list)
    proper_powers: list[dict] = field(default_factory=list)

    def to_json(self, include_per_relator: bool = True) -> dict:
        out = {
            "max_piece_length": self.max_piece_length,
            "min_relator_length": self.min_relator_length,
            "lambda": str(self.lambda_),
            "lambda_target": str(self.lambda_target),
            "passes": self.passes,
            "passes_sixth": self.passes_sixth,
            "witness": self.witness,
            "proper_powers": self.proper_powers,
        }
        if include_per_relator:
            out["per_relator"] = self.per_relator
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "CancellationReport":
        return cls(
            obj["max_piece_length"],
            obj["min_relator_length"],
            Fraction(obj["lambda"]),
            Fraction(obj["lambda_target"]),
            obj["passes"],
            obj["passes_sixth"],
            obj["witness"],
            obj.get("per_relator", []),
            obj.get("proper_powers", []),
        )


def _longest_pieces(sym: SymmetrizedRelatorSet, backend=None):
    ngens = sym.presentation.rank
    text: list[int] = []
    owner: list[int] = []
    offset: list[int] = []
    starts = []
    for k, cw in enumerate(sym.words):
        L = len(cw)
        starts.append(len(text))
        text.extend(cw.codes)
        text.extend(cw.codes)
        text.append(2 * ngens + k)  # unique separator
        owner.extend([k] * L + [-1] * (L + 1))
        offset.extend(list(range(L)) + [-1] * (L + 1))
    sa = kernels.suffix_array(text).tolist()
    lcp = kernels.lcp_array(text, sa, backend=backend)
    lengths = [len(cw) for cw in sym.words]
    periods = [cw.period for cw in sym.words]
    best, wit = kernels.piece_scan(sa, lcp, owner, offset, lengths, periods, len(sym.words), backend=backend)
    witnesses = [None if a < 0 else ((owner[a], offset[a]), (owner[b], offset[b])) for a, b in wit]
    return best, witnesses


def sc_verify(p: Presentation, lambda_target: Fraction | str | float = SIXTH, backend: str | None = None) -> CancellationReport:
    """Exact C'(λ) check.

    A piece is a common prefix of two elements of the symmetrized set read
    from different starting positions; for a proper power ``s^k`` two
    positions may spell the same element, and then the longest such piece is
    ``|r| - 1``.  ``lambda`` is the maximum over relators of (longest piece in
    r) / |r|, and the check passes iff it is strictly below ``lambda_target``.
    """
    if not p.relators:
        raise ValueError("presentation has no relators")
    target = Fraction(lambda_target)
    sym = SymmetrizedRelatorSet.build(p)
    best, witnesses = _longest_pieces(sym, backend)
    per_rel: dict[int, tuple[int, int]] = {}
    for k, cw in enumerate(sym.words):
        cur = per_rel.get(cw.relator)
        if cur is None or best[k] > best[cur[1]]:
            per_rel[cw.relator] = (best[k], k)
    # duplicate relators share a cyclic word with an earlier relator
    canon_word = {}
    for k, cw in enumerate(sym.words):
        canon_word.setdefault(cw.relator, k)
    per_relator = []
    lam = Fraction(0)
    arg = None
    for i, r in enumerate(p.relators):
        if i in per_rel:
            piece, k = per_rel[i]
        else:
            piece, k = _lookup_duplicate(p, sym, i, best)
        ratio = Fraction(piece, len(r))
        per_relator.append({"relator": i, "length": len(r), "longest_piece": piece, "ratio": str(ratio)})
        if piece and (arg is None or ratio > lam):
            lam, arg = ratio, k
    witness = None
    if arg is not None:
        (wa, oa), (wb, ob) = witnesses[arg]
        A, B = sym.words[wa], sym.words[wb]
        piece_len = best[arg]
        witness = {
            "piece": format_word(p.word_from_codes(A.rotation(oa)[:piece_len])),
            "piece_length": piece_len,
            "relator_length": len(A),
            "element_a": {"relator": A.relator, "inverted": A.inverted, "offset": oa},
            "element_b": {"relator": B.relator, "inverted": B.inverted, "offset": ob},
        }
    powers = []
    for cw in sym.words:
        if not cw.inverted and cw.period < len(cw):
            powers.append(
                {
                    "relator": cw.relator,
                    "root": format_word(p.word_from_codes(cw.codes[: cw.period])),
                    "exponent": len(cw) // cw.period,
                }
            )
    return CancellationReport(
        max_piece_length=max(best) if best else 0,
        min_relator_length=min(len(r) for r in p.relators),
        lambda_=lam,
        lambda_target=target,
        passes=lam < target,
        passes_sixth=lam < SIXTH,
        witness=witness,
        per_relator=per_relator,
        proper_powers=powers,
    )


def _lookup_duplicate(p, sym, i, best):
    c = tuple(p.codes(p.relators[i]))
    k0 = least_rotation(c)
    key = c[k0:] + c[:k0]
    for k, cw in enumerate(sym.words):
        j = least_rotation(cw.codes)
        if cw.codes[j:] + cw.codes[:j] == key:
            return best[k], k
    raise AssertionError("relator missing from symmetrized set")


def check_witness(p: Presentation, report: CancellationReport) -> bool:
    """Re-check that the reported piece is a common prefix of two distinct elements."""
    w = report.witness
    if w is None:
        return report.max_piece_length == 0

    def element(desc):
        c = p.codes(p.relators[desc["relator"]])
        if desc["inverted"]:
            c = [x ^ 1 for x in reversed(c)]
        k = desc["offset"]
        return tuple(c[k:] + c[:k])

    a, b = element(w["element_a"]), element(w["element_b"])
    piece = tuple(p.codes(Word.parse(w["piece"], p.generators))) if w["piece"] != "1" else ()
    if len(piece) != w["piece_length"] or a[: len(piece)] != piece or b[: len(piece)] != piece:
        return False
    if a != b:
        return True
    same_position = w["element_a"] == w["element_b"]
    # equal elements read from two positions of a proper power
    return not same_position and len(piece) < len(a)


# --------------------------------------------------------------------- Dehn

_BASE = 0x9E3779B97F4A7C15  # odd, so invertible mod 2**64
_BASE_INV = pow(_BASE, -1, 1 << 64)


def _powers(base: int, n: int) -> np.ndarray:
    out = np.empty(n, dtype=np.uint64)
    if n:
        out[0] = 1
        out[1:] = base
        out = np.cumprod(out, dtype=np.uint64)
    return out


def _window_hashes(seq: np.ndarray, width: int, count: int, pw: np.ndarray, pinv: np.ndarray) -> np.ndarray:
    """Position-independent hashes of ``seq[i:i+width]`` for ``i < count``."""
    vals = (seq.astype(np.uint64) + np.uint64(1)) * pw[: len(seq)]
    prefix = np.zeros(len(seq) + 1, dtype=np.uint64)
    np.cumsum(vals, out=prefix[1:])
    return (prefix[width : width + count] - prefix[:count]) * pinv[:count]


class DehnSolver:
    """Dehn's algorithm for a presentation certified C'(1/6).

    Any subword of length > |r|/2 of a symmetrized relator r is longer than
    every piece, so its first ⌊|r|/2⌋+1 letters occur at a single position of
    the symmetrized set.  Those windows are indexed by hash per relator length.
    """

    def __init__(self, p: Presentation, report: CancellationReport | None = None):
        report = report if report is not None else sc_verify(p)
        if not report.passes_sixth:
            raise SmallCancellationError(f"presentation is not C'(1/6): lambda = {report.lambda_}")
        self.p = p
        self.report = report
        self.sym = SymmetrizedRelatorSet.build(p)
        maxlen = 2 * max(len(cw) for cw in self.sym.words) + 1
        self._pw = _powers(_BASE, maxlen)
        self._pinv = _powers(_BASE_INV, maxlen)
        self._arrays = [np.array(cw.codes + cw.codes, dtype=np.int64) for cw in self.sym.words]
        by_width: dict[int, list[int]] = {}
        for k, cw in enumerate(self.sym.words):
            by_width.setdefault(len(cw) // 2 + 1, []).append(k)
        self.classes = []
        for width in sorted(by_width):
            hs, ids, offs = [], [], []
            for k in by_width[width]:
                L = len(self.sym.words[k])
                hs.append(_window_hashes(self._arrays[k], width, L, self._pw, self._pinv))
                ids.append(np.full(L, k))
                offs.append(np.arange(L))
            h = np.concatenate(hs)
            order = np.argsort(h, kind="stable")
            self.classes.append((width, h[order], np.concatenate(ids)[order], np.concatenate(offs)[order]))

    def _grow(self, n):
        if n > len(self._pw):
            self._pw = _powers(_BASE, n)
            self._pinv = _powers(_BASE_INV, n)

    def find(self, w: list[int]):
        """Leftmost (start, length, word, offset) with a relator-majority match, or None."""
        n = len(w)
        if n == 0:
            return None
        self._grow(n + 1)
        arr = np.array(w, dtype=np.int64)
        best = None
        for width, hashes, ids, offs in self.classes:
            if n < width:
                continue
            hw = _window_hashes(arr, width, n - width + 1, self._pw, self._pinv)
            lo = np.searchsorted(hashes, hw, side="left")
            hi = np.searchsorted(hashes, hw, side="right")
            for i in np.nonzero(hi > lo)[0]:
                if best is not None and i >= best[0]:
                    break
                for j in range(lo[i], hi[i]):
                    k, off = int(ids[j]), int(offs[j])
                    doubled = self._arrays[k]
                    if np.array_equal(arr[i : i + width], doubled[off : off + width]):
                        L = len(self.sym.words[k])
                        m = width
                        limit = min(L, n - i)
                        while m < limit and w[i + m] == doubled[off + m]:
                            m += 1
                        best = (int(i), m, k, off)
                        break
                if best is not None and best[0] == i:
                    break
        return best

    def reduce(self, word: Word) -> tuple[Word, list[int]]:
        """Dehn-reduce ``word``; returns the result and the length after each step."""
        w = self.p.codes(word)
        trace = [len(w)]
        while True:
            hit = self.find(w)
            if hit is None:
                break
            i, m, k, off = hit
            rot = self.sym.words[k].rotation(off)
            rest_inv = [x ^ 1 for x in reversed(rot[m:])]
            w = _concat(_concat(w[:i], rest_inv), w[i + m :])
            if len(w) >= trace[-1]:
                raise AssertionError("Dehn step failed to shorten the word")
            trace.append(len(w))
        return self.p.word_from_codes(w), trace

    def is_trivial(self, word: Word) -> bool:
        return not self.reduce(word)[0]


def _concat(a: list[int], b: list[int]) -> list[int]:
    k = 0
    la = len(a)
    while k < la and k < len(b) and a[la - 1 - k] == b[k] ^ 1:
        k += 1
    return a[: la - k] + b[k:]


@functools.lru_cache(maxsize=8)
def dehn_solver(p: Presentation) -> DehnSolver:
    return DehnSolver(p)


def dehn_reduce(w: Word, p: Presentation) -> Word:
    """Reduce ``w`` by Dehn's algorithm; empty iff ``w`` is trivial in ``p``.

    Raises :class:`SmallCancellationError` unless ``p`` is C'(1/6).
    """
    return dehn_solver(p).reduce(w)[0]

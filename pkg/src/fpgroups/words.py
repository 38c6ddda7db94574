"""Free-group words: reduction, inversion, substitution, parsing and formatting.

A word is an immutable, freely reduced tuple of letters.  Each letter is a
pair ``(name, sign)`` with ``sign`` in ``{+1, -1}``.  The empty word is the
identity.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

Letter = tuple[str, int]

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class AlphabetError(ValueError):
    """A letter uses a symbol outside the expected alphabet."""


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


def is_generator_name(name: str) -> bool:
    return bool(NAME_RE.match(name))


def _check_alphabet(letters: Iterable[Letter], alphabet) -> None:
    allowed = set(alphabet)
    for name, _ in letters:
        if name not in allowed:
            raise AlphabetError(f"symbol {name!r} not in alphabet {sorted(allowed)}")


def _free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for name, sign in letters:
        if out and out[-1][0] == name and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((name, sign))
    return tuple(out)


class Word:
    """Freely reduced word in a free group."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[Letter] = (), alphabet: Sequence[str] | None = None):
        letters = tuple(letters)
        for letter in letters:
            if len(letter) != 2 or letter[1] not in (1, -1):
                raise ValueError(f"bad letter {letter!r}")
        if alphabet is not None:
            _check_alphabet(letters, alphabet)
        object.__setattr__(self, "letters", _free_reduce(letters))
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _trusted(cls, letters: tuple[Letter, ...]) -> "Word":
        # letters already freely reduced
        w = object.__new__(cls)
        object.__setattr__(w, "letters", letters)
        object.__setattr__(w, "_hash", None)
        return w

    @classmethod
    def gen(cls, name: str, power: int = 1) -> "Word":
        sign = 1 if power > 0 else -1
        return cls._trusted(((name, sign),) * abs(power))

    @classmethod
    def parse(cls, text: str, alphabet: Sequence[str] | None = None) -> "Word":
        return parse_word(text, alphabet)

    def __setattr__(self, key, value):
        raise AttributeError("Word is immutable")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.letters[item])
        return self.letters[item]

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        if isinstance(other, Word):
            return self.letters == other.letters
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.letters))
        return self._hash

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        a, b = self.letters, other.letters
        # cancellation only happens at the boundary
        k = 0
        while k < len(a) and k < len(b) and a[-1 - k][0] == b[k][0] and a[-1 - k][1] == -b[k][1]:
            k += 1
        return Word._trusted(a[: len(a) - k] + b[k:])

    def inverse(self) -> "Word":
        return Word._trusted(tuple((n, -s) for n, s in reversed(self.letters)))

    __invert__ = inverse

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return Word()
        core, conj = cyclic_reduce(self)
        return conj * Word._trusted(core.letters * n) * conj.inverse()

    def symbols(self) -> set[str]:
        return {n for n, _ in self.letters}

    def exponent_sum(self, name: str) -> int:
        return sum(s for n, s in self.letters if n == name)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    def __str__(self) -> str:
        return format_word(self)


def reduce(raw: Iterable[Letter], alphabet: Sequence[str] | None = None) -> Word:
    """Freely reduce a sequence of signed letters.

    Raises :class:`AlphabetError` if ``alphabet`` is given and a letter lies
    outside it.
    """
    return Word(raw, alphabet)


def invert(w: Word) -> Word:
    return w.inverse()


def commutator(x: Word, y: Word) -> Word:
    """``[x, y] = x^-1 y^-1 x y``."""
    return x.inverse() * y.inverse() * x * y


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split ``w`` as ``conjugator * core * conjugator^-1`` with a cyclically reduced core."""
    letters = w.letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i][0] == letters[j][0] and letters[i][1] == -letters[j][1]:
        i += 1
        j -= 1
    return Word._trusted(letters[i : j + 1]), Word._trusted(letters[:i])


def is_cyclically_reduced(w: Word) -> bool:
    L = w.letters
    return len(L) < 2 or not (L[0][0] == L[-1][0] and L[0][1] == -L[-1][1])


def rotate(w: Word, k: int) -> Word:
    """Cyclic rotation by ``k`` letters; ``w`` must be cyclically reduced."""
    if not w.letters:
        return w
    k %= len(w.letters)
    return Word._trusted(w.letters[k:] + w.letters[:k])


class GeneratorMap:
    """Homomorphism of free groups given on generators."""

    def __init__(self, assignment: Mapping[str, Word], domain: Sequence[str] | None = None):
        self.assignment = dict(assignment)
        self.domain = tuple(domain) if domain is not None else tuple(self.assignment)
        missing = [g for g in self.domain if g not in self.assignment]
        if missing:
            raise AlphabetError(f"map is not total: no image for {missing}")

    def __getitem__(self, name: str) -> Word:
        return self.assignment[name]

    def compose(self, after: "GeneratorMap") -> "GeneratorMap":
        """The map ``after ∘ self``."""
        return GeneratorMap({g: substitute(self.assignment[g], after) for g in self.domain}, self.domain)

    @classmethod
    def identity(cls, alphabet: Sequence[str]) -> "GeneratorMap":
        return cls({g: Word.gen(g) for g in alphabet}, alphabet)


def substitute(w: Word, m: GeneratorMap | Mapping[str, Word]) -> Word:
    if not isinstance(m, GeneratorMap):
        m = GeneratorMap(m)
    out: list[Letter] = []
    images = m.assignment
    for name, sign in w.letters:
        if name not in images or name not in m.domain:
            raise AlphabetError(f"symbol {name!r} outside the map's domain")
        img = images[name].letters
        if sign < 0:
            img = tuple((n, -s) for n, s in reversed(img))
        for n, s in img:
            if out and out[-1][0] == n and out[-1][1] == -s:
                out.pop()
            else:
                out.append((n, s))
    return Word._trusted(tuple(out))


# ---------------------------------------------------------------- formatting


def format_word(w: Word) -> str:
    """Canonical text: runs compressed into powers, ``*`` separated, ``1`` for identity."""
    if not w.letters:
        return "1"
    parts = []
    letters = w.letters
    i = 0
    while i < len(letters):
        name, sign = letters[i]
        j = i
        while j < len(letters) and letters[j] == (name, sign):
            j += 1
        e = (j - i) * sign
        parts.append(name if e == 1 else f"{name}^{e}")
        i = j
    return "*".join(parts)


# ------------------------------------------------------------------- parsing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
  | (?P<int>\d+)
  | (?P<op>[*^()\[\],<>|=+\-])
    """,
    re.VERBOSE,
)


class Token:
    __slots__ = ("kind", "text", "line", "column")

    def __init__(self, kind, text, line, column):
        self.kind, self.text, self.line, self.column = kind, text, line, column

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.line}:{self.column})"


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            tokens.append(Token(kind if kind != "op" else chunk, chunk, line, col))
        for ch in chunk:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class WordParser:
    """Recursive-descent parser for the word grammar.

    ``word := factor (["*"] factor)*``; ``factor := atom ("^" ["-"|"+"] int)?``;
    ``atom := name | "1" | "(" word ")" | "[" word "," word "]"``.
    """

    def __init__(self, tokens: list[Token], alphabet: Sequence[str] | None = None):
        self.tokens = tokens
        self.i = 0
        self.alphabet = set(alphabet) if alphabet is not None else None

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.column)

    def expect(self, kind: str) -> Token:
        tok = self.tok
        if tok.kind != kind:
            shown = tok.text or "end of input"
            self.error(f"expected {kind!r}, found {shown!r}")
        self.i += 1
        return tok

    def _starts_atom(self) -> bool:
        t = self.tok
        return t.kind in ("name", "(", "[") or (t.kind == "int" and t.text == "1")

    def word(self) -> Word:
        if not self._starts_atom():
            shown = self.tok.text or "end of input"
            self.error(f"expected a word, found {shown!r}")
        result = self.factor()
        while True:
            if self.tok.kind == "*":
                self.i += 1
                result = result * self.factor()
            elif self._starts_atom():
                result = result * self.factor()
            else:
                return result

    def factor(self) -> Word:
        base = self.atom()
        if self.tok.kind == "^":
            self.i += 1
            return base ** self.exponent()
        return base

    def exponent(self) -> int:
        sign = 1
        paren = False
        if self.tok.kind == "(":
            paren = True
            self.i += 1
        if self.tok.kind in ("-", "+"):
            sign = -1 if self.tok.kind == "-" else 1
            self.i += 1
        n = int(self.expect("int").text) * sign
        if paren:
            self.expect(")")
        return n

    def atom(self) -> Word:
        tok = self.tok
        if tok.kind == "name":
            self.i += 1
            if self.alphabet is not None and tok.text not in self.alphabet:
                raise ParseError(f"undeclared generator {tok.text!r}", tok.line, tok.column)
            return Word.gen(tok.text)
        if tok.kind == "int":
            if tok.text != "1":
                self.error(f"only 1 may appear as a literal, found {tok.text!r}")
            self.i += 1
            return Word()
        if tok.kind == "(":
            self.i += 1
            w = self.word()
            self.expect(")")
            return w
        if tok.kind == "[":
            self.i += 1
            x = self.word()
            self.expect(",")
            y = self.word()
            self.expect("]")
            return commutator(x, y)
        shown = tok.text or "end of input"
        self.error(f"expected a generator, '1', '(' or '[', found {shown!r}")


def parse_word(text: str, alphabet: Sequence[str] | None = None) -> Word:
    """Parse a word such as ``a*b^-1*[a,b]^2``.

    With ``alphabet`` given, undeclared generators raise :class:`ParseError`.
    """
    parser = WordParser(tokenize(text), alphabet)
    w = parser.word()
    if parser.tok.kind != "eof":
        parser.error(f"unexpected {parser.tok.text!r}")
    return w

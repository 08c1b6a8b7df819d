"""Free-group words, cyclic words, and chains over a ranked letter alphabet.

Letters are written a-z for generators and A-Z for inverses, so the rank is
at most 26. Words are freely reduced at construction; cyclic words are
cyclically reduced and identified with their lexicographically minimal
rotation (ordering a < A < b < B < ...), which gives stable hash keys and
deterministic output. All values are immutable after construction and every
operation here is a pure function.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import (
    ArityMismatch,
    ParseError,
    TrivialWord,
    UnbalancedSigns,
)

MAX_RANK = 26


@dataclass(frozen=True, order=True)
class Letter:
    """A generator (inverted=False) or inverse generator of a free group."""

    generator_index: int
    inverted: bool = False

    def inverse(self) -> "Letter":
        return Letter(self.generator_index, not self.inverted)

    def __str__(self) -> str:
        ch = chr(ord("a") + self.generator_index)
        return ch.upper() if self.inverted else ch

    @staticmethod
    def from_char(ch: str, rank: int = MAX_RANK) -> "Letter":
        if len(ch) != 1 or not ch.isascii() or not ch.isalpha():
            raise ParseError(f"not a letter: {ch!r}")
        index = ord(ch.lower()) - ord("a")
        if index >= rank:
            raise ParseError(f"letter {ch!r} is outside rank {rank}")
        return Letter(index, ch.isupper())


def free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    """Freely reduce a letter sequence by cancelling adjacent inverse pairs."""
    out: list[Letter] = []
    for x in letters:
        if out and out[-1] == x.inverse():
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Word:
    """A freely reduced word. Construction reduces its input."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        object.__setattr__(self, "letters", free_reduce(letters))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(("Word", self.letters))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        w = Word()
        for _ in range(k):
            w = w * self
        return w

    def inverse(self) -> "Word":
        return Word(tuple(x.inverse() for x in reversed(self.letters)))

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        return "".join(str(x) for x in self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def max_rank(self) -> int:
        """1 + largest generator index used (0 for the identity)."""
        return 1 + max((x.generator_index for x in self.letters), default=-1)


class CyclicWord:
    """A cyclically reduced nonempty word considered up to rotation.

    The stored letter tuple is the canonical (lexicographically minimal)
    rotation; equality and hashing go through it.
    """

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter]):
        letters = tuple(letters)
        if not letters:
            raise TrivialWord("cyclic word must be nonempty")
        n = len(letters)
        for i in range(n):
            if letters[i] == letters[(i + 1) % n].inverse():
                raise ParseError(
                    f"not cyclically reduced: cancellation at position {i}"
                )
        object.__setattr__(self, "letters", min(
            letters[i:] + letters[:i] for i in range(n)
        ))

    def __setattr__(self, name, value):
        raise AttributeError("CyclicWord is immutable")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, CyclicWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(("CyclicWord", self.letters))

    def __str__(self) -> str:
        return "".join(str(x) for x in self.letters)

    def __repr__(self) -> str:
        return f"CyclicWord({str(self)!r})"

    def sort_key(self):
        return (len(self.letters), self.letters)

    def rotations(self) -> list[tuple[Letter, ...]]:
        n = len(self.letters)
        return [self.letters[i:] + self.letters[:i] for i in range(n)]

    def inverse(self) -> "CyclicWord":
        return CyclicWord(tuple(x.inverse() for x in reversed(self.letters)))

    def word(self) -> Word:
        return Word(self.letters)

    def power(self, k: int) -> "CyclicWord":
        if k < 1:
            raise ValueError("power must be >= 1")
        return CyclicWord(self.letters * k)


def cyclic_reduce(w: Word) -> tuple[CyclicWord, Word]:
    """Cyclically reduce a word.

    Returns (cyclic, conjugator) with conjugator * cyclic * conjugator^-1
    freely equal to w, where cyclic is read at its canonical rotation (the
    conjugator absorbs the rotation prefix). Raises TrivialWord if w reduces
    to the identity.
    """
    letters = list(w.letters)
    prefix: list[Letter] = []
    while len(letters) >= 2 and letters[0] == letters[-1].inverse():
        prefix.append(letters[0])
        letters = letters[1:-1]
    if not letters:
        raise TrivialWord("word is conjugate to the identity")
    cw = CyclicWord(letters)
    shift = 0
    while tuple(letters[shift:] + letters[:shift]) != cw.letters:
        shift += 1
    return cw, Word(prefix + letters[:shift])


class Chain:
    """A formal combination of cyclic words with positive integer coefficients.

    Terms are merged and stored in a canonical sorted order, so chains with
    the same content compare and hash equal.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[CyclicWord, int]]):
        merged: dict[CyclicWord, int] = {}
        for cw, coeff in terms:
            if not isinstance(coeff, int) or coeff < 1:
                raise ValueError(f"coefficient must be a positive integer: {coeff!r}")
            merged[cw] = merged.get(cw, 0) + coeff
        if not merged:
            raise TrivialWord("chain must have at least one term")
        object.__setattr__(
            self,
            "terms",
            tuple(sorted(merged.items(), key=lambda t: t[0].sort_key())),
        )

    def __setattr__(self, name, value):
        raise AttributeError("Chain is immutable")

    @classmethod
    def from_words(cls, words: Iterable[Word | tuple[Word, int]]) -> "Chain":
        """Build a chain from words, cyclically reducing each term."""
        terms = []
        for item in words:
            w, coeff = item if isinstance(item, tuple) else (item, 1)
            cw, _ = cyclic_reduce(w)
            terms.append((cw, coeff))
        return cls(terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Chain) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(("Chain", self.terms))

    def __iter__(self):
        return iter(self.terms)

    def total_length(self) -> int:
        """Coefficient-weighted total letter count."""
        return sum(coeff * len(cw) for cw, coeff in self.terms)

    def max_rank(self) -> int:
        return 1 + max(
            x.generator_index for cw, _ in self.terms for x in cw.letters
        )

    def __str__(self) -> str:
        parts = []
        for cw, coeff in self.terms:
            parts.append(str(cw) if coeff == 1 else f"{coeff}*{cw}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Chain({str(self)!r})"


def exponent_sums(obj) -> dict[int, int]:
    """Total signed exponent of each generator, coefficient-weighted."""
    sums: dict[int, int] = {}
    if isinstance(obj, Chain):
        items = [(cw.letters, coeff) for cw, coeff in obj.terms]
    elif isinstance(obj, (Word, CyclicWord)):
        items = [(tuple(obj), 1)]
    else:
        raise TypeError(f"expected Chain, Word or CyclicWord, got {type(obj)!r}")
    for letters, coeff in items:
        for x in letters:
            sums[x.generator_index] = sums.get(x.generator_index, 0) + (
                -coeff if x.inverted else coeff
            )
    return sums


def is_homologically_trivial(obj) -> bool:
    """True iff every generator's total signed exponent is zero."""
    return all(v == 0 for v in exponent_sums(obj).values())


def commutator(u: Word, v: Word) -> Word:
    """The freely reduced commutator u v u^-1 v^-1."""
    return u * v * u.inverse() * v.inverse()


def product_of_commutators(pairs: Sequence[tuple[Word, Word]]) -> Word:
    """The freely reduced product of commutators [u_i, v_i]."""
    out = Word()
    for u, v in pairs:
        out = out * commutator(u, v)
    return out


def is_proper_power(w: CyclicWord) -> Optional[tuple[CyclicWord, int]]:
    """Maximal decomposition w = root^k with k >= 2, or None.

    A cyclic word is a proper power exactly when it has a period that is a
    proper divisor of its length; the smallest period gives the maximal
    exponent.
    """
    letters = w.letters
    n = len(letters)
    for period in range(1, n):
        if n % period:
            continue
        if letters[period:] + letters[:period] == letters:
            return CyclicWord(letters[:period]), n // period
    return None


# ---------------------------------------------------------------------------
# Parsing
#
# Word grammar:   word := factor+
#                 factor := letter | '[' word ',' word ']' | '(' word ')'
#                           | factor '^' int
# Chain grammar:  chain := term ('+' term)*,  term := (int '*')? word
# Whitespace is permitted between tokens. '[u,v]' is commutator sugar.
# ---------------------------------------------------------------------------

_WORD_STOP = {",", "]", ")", "+"}


class _Parser:
    def __init__(self, text: str, rank: int):
        if not 1 <= rank <= MAX_RANK:
            raise ParseError(f"rank must be in 1..{MAX_RANK}, got {rank}")
        self.text = text
        self.rank = rank
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str | None:
        self._skip_ws()
        if self.pos < len(self.text):
            return self.text[self.pos]
        return None

    def _expect(self, ch: str):
        got = self._peek()
        if got != ch:
            raise ParseError(f"expected {ch!r}, found {got!r}", self.pos)
        self.pos += 1

    def _parse_int(self) -> int:
        self._skip_ws()
        start = self.pos
        if self._peek() == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or self.text[start:self.pos] == "-":
            raise ParseError("expected an integer", start)
        return int(self.text[start:self.pos])

    def parse_factor(self) -> Word:
        ch = self._peek()
        if ch is None:
            raise ParseError("unexpected end of input", self.pos)
        if ch == "[":
            self.pos += 1
            u = self.parse_word()
            self._expect(",")
            v = self.parse_word()
            self._expect("]")
            w = commutator(u, v)
        elif ch == "(":
            self.pos += 1
            w = self.parse_word()
            self._expect(")")
        elif ch.isalpha():
            self.pos += 1
            w = Word((Letter.from_char(ch, self.rank),))
        else:
            raise ParseError(f"unexpected character {ch!r}", self.pos)
        while self._peek() == "^":
            self.pos += 1
            k = self._parse_int()
            if k <= 0:
                raise ParseError(f"power must be positive, got {k}", self.pos)
            w = w ** k
        return w

    def parse_word(self) -> Word:
        out = Word()
        saw_factor = False
        while True:
            ch = self._peek()
            if ch is None or ch in _WORD_STOP:
                break
            out = out * self.parse_factor()
            saw_factor = True
        if not saw_factor:
            raise ParseError("empty word", self.pos)
        return out

    def parse_term(self) -> tuple[Word, int]:
        coeff = 1
        self._skip_ws()
        ch = self._peek()
        if ch is not None and (ch.isdigit() or ch == "-"):
            coeff = self._parse_int()
            self._expect("*")
            if coeff <= 0:
                raise ParseError(f"coefficient must be positive, got {coeff}", self.pos)
        return self.parse_word(), coeff

    def parse_chain(self) -> list[tuple[Word, int]]:
        terms = [self.parse_term()]
        while self._peek() == "+":
            self.pos += 1
            terms.append(self.parse_term())
        return terms

    def expect_end(self):
        if self._peek() is not None:
            raise ParseError(
                f"trailing input {self.text[self.pos:]!r}", self.pos
            )


def parse_word(text: str, rank: int = MAX_RANK) -> Word:
    """Parse a word like "abAB", "[a,b]", "(ab)^3"; returns its free reduction."""
    p = _Parser(text, rank)
    w = p.parse_word()
    p.expect_end()
    return w


def parse_chain_terms(text: str, rank: int = MAX_RANK) -> list[tuple[Word, int]]:
    """Parse a chain like "2*abAB + cC" into (word, coefficient) terms."""
    p = _Parser(text, rank)
    terms = p.parse_chain()
    p.expect_end()
    return terms


def parse_chain(text: str, rank: int = MAX_RANK) -> Chain:
    """Parse a chain and cyclically reduce each term."""
    return Chain.from_words(
        [(w, coeff) for w, coeff in parse_chain_terms(text, rank)]
    )


# ---------------------------------------------------------------------------
# Word family constructors
# ---------------------------------------------------------------------------


def random_reduced_word(n: int, rank: int, seed: int) -> Word:
    """A uniformly random freely reduced word of exact length n.

    The model is the non-backtracking uniform walk: the first letter is
    uniform over the 2*rank symbols and each later letter is uniform over the
    2*rank - 1 symbols that do not cancel the previous one. Deterministic for
    a fixed seed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 2 <= rank <= MAX_RANK:
        raise ValueError(f"rank must be in 2..{MAX_RANK}")
    rng = random.Random(seed)
    symbols = [Letter(g, inv) for g in range(rank) for inv in (False, True)]
    first = rng.randrange(2 * rank)
    letters = [symbols[first]]
    for _ in range(n - 1):
        banned = symbols.index(letters[-1].inverse())
        k = rng.randrange(2 * rank - 1)
        if k >= banned:
            k += 1
        letters.append(symbols[k])
    w = Word(letters)
    assert len(w) == n, "non-backtracking walk must already be reduced"
    return w


class SeifertWord(NamedTuple):
    word: Word
    proper_power: Optional[tuple[CyclicWord, int]]


def seifert_family_word(
    N: int,
    signs: Sequence[int],
    conjugators: Sequence[Word],
) -> SeifertWord:
    """Balanced product of conjugated commutator powers in F(a, b).

    Builds the freely reduced product of g_i [a,b]^(s_i * N) g_i^-1 over the
    given signs s_i (each +1 or -1, summing to zero) and conjugators g_i in
    {a, b}. Also reports whether the result is a proper power, since the
    one-relator quotient is torsion-free exactly when it is not.
    """
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    if len(signs) != len(conjugators):
        raise ArityMismatch(
            f"{len(signs)} signs but {len(conjugators)} conjugators"
        )
    if len(signs) < 2:
        raise ValueError("need at least two factors")
    if any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be +1 or -1")
    if sum(signs) != 0:
        raise UnbalancedSigns(f"signs sum to {sum(signs)}, expected 0")
    for g in conjugators:
        if g.max_rank() > 2:
            raise ValueError(f"conjugator {g} is not a word in a, b")
    base = commutator(Word((Letter(0),)), Word((Letter(1),)))
    out = Word()
    for s, g in zip(signs, conjugators):
        out = out * (g * base ** (s * N) * g.inverse())
    power = None
    if not out.is_identity:
        cw, _ = cyclic_reduce(out)
        power = is_proper_power(cw)
    return SeifertWord(out, power)

"""Symbolic normal ordering of CAR operator words.

A word is the product

    F_n = [A+(f_n)]^a_n [A-(g_n)]^b_n ... [A+(f_1)]^a_1 [A-(g_1)]^b_1

with factor index 1 rightmost.  Its normal-ordered expansion carries one
term per partition of the index set: each part contributes a chain of
contractions <g_upper|f_lower> between consecutive part elements, the part
maxima keep their creators, the part minima keep their annihilators, and
the coefficient picks up (-1)**xi for the line crossings of the diagram.

The two-block variant normal-orders a product of annihilators times a
product of creators; only singleton-and-pair partitions survive there, so
the sum runs over partial matchings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import sparse

from .combinatorics import (
    Matching,
    enumerate_matchings,
    enumerate_partitions,
    sign_xi,
    sign_xi_matching,
)
from .fock import ModeSpace, annihilation, creation

MAX_WORD_LENGTH = 7
COEFF_PRUNE = 1e-15


@dataclass(frozen=True)
class WordFactor:
    """One factor [A+(f)]^alpha [A-(g)]^beta."""

    f: np.ndarray | None
    g: np.ndarray | None
    alpha: int
    beta: int

    def __post_init__(self):
        if self.alpha not in (0, 1) or self.beta not in (0, 1):
            raise ValueError("alpha and beta must be 0 or 1")
        if self.alpha and self.f is None:
            raise ValueError("alpha=1 factor needs a creator vector")
        if self.beta and self.g is None:
            raise ValueError("beta=1 factor needs an annihilator vector")


@dataclass(frozen=True)
class OperatorWord:
    """Product of word factors; factors[0] has index 1 (rightmost)."""

    space: ModeSpace
    factors: tuple[WordFactor, ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("a word needs at least one factor")
        for fac in self.factors:
            for v in (fac.f, fac.g):
                if v is not None and np.shape(v) != (self.space.modes,):
                    raise ValueError("factor vectors must live in the word's mode space")

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def alpha(self) -> tuple[int, ...]:
        return tuple(fac.alpha for fac in self.factors)

    @property
    def beta(self) -> tuple[int, ...]:
        return tuple(fac.beta for fac in self.factors)


@dataclass(frozen=True)
class NormalTerm:
    """coefficient * prod A+(f_i) (i descending) * prod A-(g_j) (j descending)."""

    coefficient: complex
    creator_indices: tuple[int, ...]
    annihilator_indices: tuple[int, ...]


@dataclass(frozen=True)
class NormalForm:
    word: OperatorWord
    terms: tuple[NormalTerm, ...]

    def identity_coefficient(self) -> complex:
        return sum(
            (t.coefficient for t in self.terms
             if not t.creator_indices and not t.annihilator_indices),
            start=0.0 + 0.0j,
        )


def normal_order_word(word: OperatorWord) -> NormalForm:
    """Normal-ordered expansion of a word, one term per contributing partition."""
    n = word.n
    if n > MAX_WORD_LENGTH:
        raise ValueError(f"word length {n} exceeds the guard {MAX_WORD_LENGTH}")
    alpha, beta = word.alpha, word.beta
    terms = []
    for partition in enumerate_partitions(n):
        coeff = complex((-1) ** sign_xi(partition, alpha, beta))
        for upper, lower in partition.internal_pairs():
            if not (beta[upper - 1] and alpha[lower - 1]):
                coeff = 0.0
                break
            coeff *= np.vdot(word.factors[upper - 1].g, word.factors[lower - 1].f)
        if abs(coeff) < COEFF_PRUNE:
            continue
        creators = tuple(
            i for i in sorted(partition.g_out, reverse=True) if alpha[i - 1]
        )
        annihilators = tuple(
            j for j in sorted(partition.g_in, reverse=True) if beta[j - 1]
        )
        terms.append(NormalTerm(coeff, creators, annihilators))
    terms.sort(key=lambda t: (t.creator_indices, t.annihilator_indices))
    return NormalForm(word, tuple(terms))


def normal_order_two_block(
    space: ModeSpace,
    annihilators: Sequence[tuple[np.ndarray, int]],
    creators: Sequence[tuple[np.ndarray, int]],
) -> NormalForm:
    """Normal ordering of prod_j [A-(g_j)]^b_j * prod_i [A+(f_i)]^a_i.

    Both products are written with the largest index leftmost.  The result
    is expressed as a NormalForm over the padded word of length m + n
    (creators at indices 1..m, annihilators at m+1..m+n).
    """
    n = len(annihilators)
    m = len(creators)
    if max(m, n) > 6:
        raise ValueError("two-block normal ordering supports block sizes <= 6")
    alpha = tuple(a for _, a in creators)
    beta = tuple(b for _, b in annihilators)
    factors = [WordFactor(f, None, a, 0) for f, a in creators]
    factors += [WordFactor(None, g, 0, b) for g, b in annihilators]
    padded = OperatorWord(space, tuple(factors))

    terms = []
    for matching in enumerate_matchings(m, n):
        coeff = complex((-1) ** sign_xi_matching(matching, alpha, beta))
        for i, j in matching.pairs:
            if not (beta[j - 1] * alpha[i - 1]):
                coeff = 0.0
                break
            coeff *= np.vdot(annihilators[j - 1][0], creators[i - 1][0])
        if abs(coeff) < COEFF_PRUNE:
            continue
        residual_creators = tuple(
            i for i in sorted(matching.domain_complement, reverse=True) if alpha[i - 1]
        )
        residual_annihilators = tuple(
            m + j for j in sorted(matching.range_complement, reverse=True) if beta[j - 1]
        )
        terms.append(NormalTerm(coeff, residual_creators, residual_annihilators))
    terms.sort(key=lambda t: (t.creator_indices, t.annihilator_indices))
    return NormalForm(padded, tuple(terms))


def vacuum_expectation(word: OperatorWord) -> complex:
    """<vac| F_n |vac>: the identity-term coefficient of the normal form."""
    return normal_order_word(word).identity_coefficient()


# ---------------------------------------------------------------------------
# dense evaluation (the brute-force side of the equivalence tests)
# ---------------------------------------------------------------------------

def dense_word(word: OperatorWord) -> np.ndarray:
    """Evaluate the word as a dense matrix, factor n leftmost."""
    space = word.space
    out = sparse.identity(space.dim, dtype=complex, format="csr")
    for fac in reversed(word.factors):  # index n first
        if fac.alpha:
            out = out @ creation(space, fac.f)
        if fac.beta:
            out = out @ annihilation(space, fac.g)
    return out.toarray()


def dense_normal_form(nf: NormalForm) -> np.ndarray:
    space = nf.word.space
    total = np.zeros((space.dim, space.dim), dtype=complex)
    for term in nf.terms:
        op = sparse.identity(space.dim, dtype=complex, format="csr")
        for i in term.creator_indices:
            op = op @ creation(space, nf.word.factors[i - 1].f)
        for j in term.annihilator_indices:
            op = op @ annihilation(space, nf.word.factors[j - 1].g)
        total += term.coefficient * op.toarray()
    return total


# ---------------------------------------------------------------------------
# word grammar:  a+(name) a-(name) ...
# ---------------------------------------------------------------------------

class WordSyntaxError(ValueError):
    """Raised on malformed word text; carries the byte offset of the error."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte {offset})")
        self.offset = offset


_TOKEN = re.compile(r"a(?P<kind>[+-])\((?P<name>[A-Za-z_][A-Za-z0-9_]*)\)")


def tokenize_word(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN.match(text, pos)
        if match is None:
            raise WordSyntaxError(
                f"expected a+(name) or a-(name), found {text[pos:pos + 12]!r}", pos
            )
        tokens.append((match.group("kind"), match.group("name"), pos))
        pos = match.end()
    return tokens


def parse_word(text: str, vectors: dict[str, np.ndarray], space: ModeSpace) -> OperatorWord:
    """Parse a product of field operators, leftmost factor applied last.

    Adjacent ``a+(f) a-(g)`` pairs merge into a single word factor; every
    other token becomes its own factor.
    """
    tokens = tokenize_word(text)
    if not tokens:
        raise WordSyntaxError("empty word", 0)

    def lookup(name: str, offset: int) -> np.ndarray:
        if name not in vectors:
            raise WordSyntaxError(f"unknown vector {name!r}", offset)
        v = np.asarray(vectors[name], dtype=complex)
        if v.shape != (space.modes,):
            raise WordSyntaxError(
                f"vector {name!r} has {v.shape[0]} components, expected {space.modes}",
                offset,
            )
        return v

    factors: list[WordFactor] = []
    idx = len(tokens) - 1
    while idx >= 0:  # scan right to left; factor index 1 is rightmost
        kind, name, offset = tokens[idx]
        if kind == "-":
            g = lookup(name, offset)
            if idx >= 1 and tokens[idx - 1][0] == "+":
                _, fname, foffset = tokens[idx - 1]
                factors.append(WordFactor(lookup(fname, foffset), g, 1, 1))
                idx -= 2
            else:
                factors.append(WordFactor(None, g, 0, 1))
                idx -= 1
        else:
            factors.append(WordFactor(lookup(name, offset), None, 1, 0))
            idx -= 1
    return OperatorWord(space, tuple(factors))

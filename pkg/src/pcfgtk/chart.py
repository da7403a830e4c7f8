"""Span-based dynamic programming over CNF grammars.

``inside`` fills a log-space chart whose full-span start entry is the log
string probability (the sum over all derivations); ``viterbi`` finds the
single highest-probability derivation.  Both accept an optional bracketing:
chart spans that cross a bracket are suppressed, which restricts the
computation to derivations whose constituents all nest with the brackets.
Passing an empty bracketing is identical to passing none (same code path,
bit-for-bit equal results).

Both functions are pure; one immutable grammar may be shared by concurrent
calls over different sentences.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Bracketing
from .derivations import Derivation, score_counts
from .grammar import Grammar
from .logmath import NEG_INF, logsumexp


class UnknownTokenError(ValueError):
    """A sentence token is not a terminal of the grammar."""

    def __init__(self, token: str, position: int):
        super().__init__(f"token {token!r} at position {position} is not a terminal")
        self.token = token
        self.position = position


def _check_sentence(g: Grammar, sentence) -> list[str]:
    tokens = list(sentence)
    if not tokens:
        raise ValueError("sentence is empty")
    terminal_set = set(g.terminals)
    for pos, tok in enumerate(tokens):
        if tok not in terminal_set:
            raise UnknownTokenError(tok, pos)
    return tokens


def _check_brackets(brackets: Bracketing | None, n: int) -> Bracketing:
    if brackets is None:
        return Bracketing()
    if brackets.max_position() > n:
        raise ValueError(f"bracket span exceeds sentence length {n}")
    return brackets


@dataclass(frozen=True)
class InsideChart:
    """Inside log masses: ``table[i, j, a]`` for span (i, j) and nonterminal a.

    Axis order follows ``grammar.nonterminals``; unused cells hold -inf.
    """

    grammar: Grammar
    sentence: tuple[str, ...]
    table: np.ndarray

    def logmass(self, i: int, j: int, nonterminal: str) -> float:
        return float(self.table[i, j, self.grammar.nt_index[nonterminal]])

    @property
    def log_string_prob(self) -> float:
        """log P(sentence); -inf when the sentence is not in the language."""
        return self.logmass(0, len(self.sentence), self.grammar.start)

    @property
    def in_language(self) -> bool:
        return self.log_string_prob > NEG_INF


def inside(g: Grammar, sentence, brackets: Bracketing | None = None) -> InsideChart:
    """Fill the inside chart for a sentence, optionally bracket-constrained."""
    tokens = _check_sentence(g, sentence)
    n = len(tokens)
    brk = _check_brackets(brackets, n)
    table = np.full((n + 1, n + 1, len(g.nonterminals)), NEG_INF)
    idx = g.nt_index
    lp = g.log_probs
    for i, tok in enumerate(tokens):
        for rule in g.rules_for_terminal(tok):
            table[i, i + 1, idx[rule.lhs]] = lp[rule.id]
    for width in range(2, n + 1):
        for i in range(n - width + 1):
            j = i + width
            if not brk.compatible(i, j):
                continue
            masses: dict[int, list[float]] = {}
            for k in range(i + 1, j):
                for rule in g.binary_rules:
                    left = table[i, k, idx[rule.rhs[0]]]
                    right = table[k, j, idx[rule.rhs[1]]]
                    if left > NEG_INF and right > NEG_INF:
                        masses.setdefault(idx[rule.lhs], []).append(lp[rule.id] + left + right)
            for a, vals in masses.items():
                table[i, j, a] = logsumexp(vals)
    return InsideChart(g, tuple(tokens), table)


@dataclass(frozen=True)
class _Cell:
    score: float
    counts: tuple[int, ...]
    rule_id: int
    split: int  # absolute split position; -1 for lexical entries


def viterbi(
    g: Grammar, sentence, brackets: Bracketing | None = None
) -> tuple[Derivation, float] | None:
    """Best derivation of the sentence and its log probability.

    Ties on the (count-canonical) score are broken per cell by the smallest
    (split, rule id) backpointer, so the result is deterministic even when
    several derivations have exactly equal probability.  Returns None when
    the sentence has no (bracket-compatible) derivation.
    """
    tokens = _check_sentence(g, sentence)
    n = len(tokens)
    brk = _check_brackets(brackets, n)
    nrules = len(g.rules)
    best: dict[tuple[int, int, str], _Cell] = {}
    for i, tok in enumerate(tokens):
        for rule in g.rules_for_terminal(tok):
            counts = tuple(int(r == rule.id) for r in range(nrules))
            best[(i, i + 1, rule.lhs)] = _Cell(g.log_probs[rule.id], counts, rule.id, -1)
    for width in range(2, n + 1):
        for i in range(n - width + 1):
            j = i + width
            if not brk.compatible(i, j):
                continue
            for k in range(i + 1, j):
                for rule in g.binary_rules:
                    left = best.get((i, k, rule.rhs[0]))
                    right = best.get((k, j, rule.rhs[1]))
                    if left is None or right is None:
                        continue
                    counts = tuple(
                        l + r for l, r in zip(left.counts, right.counts)
                    )
                    counts = counts[: rule.id] + (counts[rule.id] + 1,) + counts[rule.id + 1 :]
                    score = score_counts(g, counts)
                    cur = best.get((i, j, rule.lhs))
                    if (
                        cur is None
                        or score > cur.score
                        or (score == cur.score and (k, rule.id) < (cur.split, cur.rule_id))
                    ):
                        best[(i, j, rule.lhs)] = _Cell(score, counts, rule.id, k)
    if (0, n, g.start) not in best:
        return None

    def backtrace(i: int, j: int, lhs: str) -> list[int]:
        cell = best[(i, j, lhs)]
        rule = g.rules[cell.rule_id]
        if rule.is_lexical:
            return [rule.id]
        return (
            [rule.id]
            + backtrace(i, cell.split, rule.rhs[0])
            + backtrace(cell.split, j, rule.rhs[1])
        )

    d = Derivation.build(g, backtrace(0, n, g.start), n)
    return d, d.log_prob

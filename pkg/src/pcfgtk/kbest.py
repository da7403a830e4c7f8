"""Exact n-best derivations via per-cell hypothesis lists.

Each chart cell keeps its top-n hypotheses, eagerly merged from child
lists; exact and simple at the scales this package targets (n up to about
a thousand).  Ordering is by descending canonical log probability with the
backpointer key as secondary criterion: the flattened (split, rule id)
tuples of the hypothesis tree, compared lexicographically.  That secondary
key agrees with the Viterbi tie-break, so ``nbest(..., 1)`` returns exactly
the Viterbi derivation.  With a large enough n the result is the complete
derivation set, which is how the estimator realizes "all derivations".
"""
from __future__ import annotations

from dataclasses import dataclass

from .chart import _check_brackets, _check_sentence
from .corpus import Bracketing
from .derivations import Derivation, score_counts
from .grammar import Grammar


@dataclass(frozen=True)
class KBestList:
    """Derivations in best-first order; short only when |D_x| < n."""

    derivations: tuple[Derivation, ...]
    n_requested: int
    in_language: bool

    def __len__(self) -> int:
        return len(self.derivations)

    def log_probs(self) -> tuple[float, ...]:
        return tuple(d.log_prob for d in self.derivations)


@dataclass(frozen=True)
class _Hyp:
    score: float
    key: tuple[int, ...]  # flattened (split, rule id) backpointers
    counts: tuple[int, ...]
    rules: tuple[int, ...]  # leftmost-derivation rule sequence


def nbest(
    g: Grammar, sentence, n: int, brackets: Bracketing | None = None
) -> KBestList:
    """Top-n distinct derivations of a sentence, best first.

    With brackets, only derivations whose constituent spans nest with every
    bracket are considered.  A sentence without any (compatible) derivation
    yields an empty list flagged not-in-language.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    tokens = _check_sentence(g, sentence)
    length = len(tokens)
    brk = _check_brackets(brackets, length)
    nrules = len(g.rules)
    cells: dict[tuple[int, int, str], list[_Hyp]] = {}
    for i, tok in enumerate(tokens):
        for rule in g.rules_for_terminal(tok):
            counts = tuple(int(r == rule.id) for r in range(nrules))
            hyp = _Hyp(g.log_probs[rule.id], (rule.id,), counts, (rule.id,))
            cells.setdefault((i, i + 1, rule.lhs), []).append(hyp)
    for key in list(cells):
        cells[key].sort(key=_rank)
    for width in range(2, length + 1):
        for i in range(length - width + 1):
            j = i + width
            if not brk.compatible(i, j):
                continue
            candidates: dict[str, list[_Hyp]] = {}
            for k in range(i + 1, j):
                for rule in g.binary_rules:
                    lefts = cells.get((i, k, rule.rhs[0]))
                    rights = cells.get((k, j, rule.rhs[1]))
                    if not lefts or not rights:
                        continue
                    for left in lefts:
                        for right in rights:
                            counts = tuple(
                                a + b for a, b in zip(left.counts, right.counts)
                            )
                            counts = (
                                counts[: rule.id]
                                + (counts[rule.id] + 1,)
                                + counts[rule.id + 1 :]
                            )
                            candidates.setdefault(rule.lhs, []).append(
                                _Hyp(
                                    score_counts(g, counts),
                                    (k, rule.id) + left.key + right.key,
                                    counts,
                                    (rule.id,) + left.rules + right.rules,
                                )
                            )
            for lhs, hyps in candidates.items():
                hyps.sort(key=_rank)
                cells[(i, j, lhs)] = hyps[:n]
    top = cells.get((0, length, g.start), [])
    derivations = tuple(
        Derivation(h.rules, length, h.score) for h in top[:n]
    )
    return KBestList(derivations, n, bool(derivations))


def _rank(h: _Hyp):
    return (-h.score, h.key)

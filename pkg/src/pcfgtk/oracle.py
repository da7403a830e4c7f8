"""Brute-force reference implementations for small instances.

Everything here works by exhaustively expanding derivations over substring
spans and then evaluating definitions literally; no dynamic-programming
shortcuts.  The chart parser, the n-best parser, and the estimator are
validated against these on small grammars.  The enumeration is shipped
(not test-only) so results on small grammars can be cross-checked from the
command line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .corpus import Bracketing, Sentence
from .derivations import Derivation, count_vector, score_counts
from .grammar import Grammar
from .logmath import logsumexp, normalized_weights

DEFAULT_LENGTH_CAP = 10
DERIVATION_GUARD = 1_000_000


class EnumerationLimitError(RuntimeError):
    """Enumeration would exceed the configured sentence or size guard."""


@dataclass(frozen=True)
class Enumeration:
    """The complete derivation set of one sentence, best-first."""

    derivations: tuple[Derivation, ...]
    total_log_prob: float

    def __len__(self) -> int:
        return len(self.derivations)


@dataclass(frozen=True)
class _Record:
    rules: tuple[int, ...]
    key: tuple[int, ...]
    spans: frozenset[tuple[int, int]]
    score: float


def _expand(g: Grammar, tokens: list[str]) -> list[_Record]:
    """All derivations over (nonterminal, span), by recursive splitting."""
    memo: dict[tuple[str, int, int], list] = {}
    budget = [DERIVATION_GUARD]

    def derive(lhs: str, i: int, j: int) -> list:
        state = memo.get((lhs, i, j))
        if state is not None:
            return state
        out = []
        if j - i == 1:
            for rule in g.rules_for_terminal(tokens[i]):
                if rule.lhs == lhs:
                    out.append(((rule.id,), (rule.id,), ((i, j),)))
        else:
            for rule in g.rules_by_lhs[lhs]:
                if rule.is_lexical:
                    continue
                for k in range(i + 1, j):
                    for lrules, lkey, lspans in derive(rule.rhs[0], i, k):
                        for rrules, rkey, rspans in derive(rule.rhs[1], k, j):
                            budget[0] -= 1
                            if budget[0] < 0:
                                raise EnumerationLimitError(
                                    f"more than {DERIVATION_GUARD} partial derivations"
                                )
                            out.append(
                                (
                                    (rule.id,) + lrules + rrules,
                                    (k, rule.id) + lkey + rkey,
                                    ((i, j),) + lspans + rspans,
                                )
                            )
        memo[(lhs, i, j)] = out
        return out

    records = []
    for rules, key, spans in derive(g.start, 0, len(tokens)):
        records.append(
            _Record(rules, key, frozenset(spans), score_counts(g, count_vector(g, rules)))
        )
    records.sort(key=lambda r: (-r.score, r.key))
    return records


def enumerate_derivations(g: Grammar, sentence, cap: int = DEFAULT_LENGTH_CAP) -> Enumeration:
    """Every derivation of the sentence, found by exhaustive expansion.

    Refuses sentences longer than ``cap`` tokens and aborts if the search
    would produce more than a million partial derivations.
    """
    tokens = [str(t) for t in sentence]
    if len(tokens) > cap:
        raise EnumerationLimitError(f"sentence length {len(tokens)} exceeds cap {cap}")
    if not tokens:
        raise ValueError("sentence is empty")
    records = _expand(g, tokens)
    derivations = tuple(Derivation(r.rules, len(tokens), r.score) for r in records)
    return Enumeration(derivations, logsumexp([d.log_prob for d in derivations]))


def _filter_compatible(records: list[_Record], brackets: Bracketing | None) -> list[_Record]:
    if brackets is None:
        return records
    return [
        r
        for r in records
        if all(brackets.compatible(i, j) for i, j in r.spans)
    ]


def _select(records: list[_Record], mode: str, n: int, brackets: Bracketing | None) -> list[_Record]:
    if mode in ("viterbi", "nbest"):
        pool = records
    elif mode in ("bracketed_viterbi", "bracketed_all"):
        pool = _filter_compatible(records, brackets)
    elif mode == "all":
        pool = records
    else:
        raise ValueError(f"unknown delta mode {mode!r}")
    if mode in ("viterbi", "bracketed_viterbi"):
        return pool[:1]
    if mode == "nbest":
        return pool[:n]
    return pool


def oracle_accumulate(g: Grammar, corpus, spec, eta: float = 1.0):
    """Growth-step sufficient statistics by literal summation.

    Reference and competing sets are selected from the full enumeration of
    each sentence per ``spec`` (a DeltaSpec), then the posterior-weighted
    count sums are evaluated directly from the definitions.  Used to verify
    the estimator's chart-based accumulation.
    """
    from .estimator import Accumulators  # local import: no cycle at load time

    acc = Accumulators.zeros(g)
    effective = 0
    for raw in corpus:
        sent = Sentence.of(raw)
        records = _expand(g, list(sent.tokens))
        ref = _select(records, spec.ref_mode, spec.n_ref, sent.brackets)
        comp = _select(records, spec.comp_mode, spec.n_comp, sent.brackets)
        if spec.enforce_subset:
            present = {r.rules for r in comp}
            comp = comp + [r for r in ref if r.rules not in present]
        if not comp or not ref:
            acc.skipped += 1
            continue
        effective += 1
        _add_weighted(g, acc.d_rule_ref, acc.d_nt_ref, ref, eta)
        _add_weighted(g, acc.d_rule_comp, acc.d_nt_comp, comp, eta)
    if effective == 0:
        raise ValueError("every sentence was skipped")
    return acc


def _add_weighted(g: Grammar, rule_acc, nt_acc, records: list[_Record], eta: float):
    weights = normalized_weights([eta * r.score for r in records])
    for rec, w in zip(records, weights):
        for rid, c in enumerate(count_vector(g, rec.rules)):
            if c:
                rule_acc[rid] += w * c
                nt_acc[g.rules[rid].lhs] += w * c


def catalan(n: int) -> int:
    """Number of binary bracketings of n+1 leaves."""
    return math.comb(2 * n, n) // (n + 1)

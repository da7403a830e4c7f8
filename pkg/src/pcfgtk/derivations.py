"""Derivations as leftmost rule sequences, with usage counts and replay.

A derivation is stored as the sequence of rule ids applied by a leftmost
derivation from the start symbol; for context-free grammars this is in
bijection with parse trees.  All log probabilities in the package are
computed by one canonical formula, ``score_counts``: the dot product of
rule-usage counts with rule log probabilities, summed in ascending rule-id
order.  Because that sum is independent of tree shape, derivations that use
the same multiset of rules receive bit-identical scores, which makes the
deterministic tie-breaking in the parsers reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass

from .grammar import Grammar


@dataclass(frozen=True)
class Derivation:
    """A leftmost rule-id sequence for one sentence, with its log probability."""

    rules: tuple[int, ...]
    sentence_len: int
    log_prob: float

    @classmethod
    def build(cls, g: Grammar, rules, sentence_len: int) -> "Derivation":
        rules = tuple(rules)
        return cls(rules, sentence_len, score_counts(g, count_vector(g, rules)))

    def __len__(self) -> int:
        return len(self.rules)


@dataclass(frozen=True)
class RuleCounts:
    """Usage counts N(rule, d) and N(nonterminal, d) for one derivation."""

    per_rule: dict[int, int]
    per_nonterminal: dict[str, int]


def count_vector(g: Grammar, rules) -> tuple[int, ...]:
    counts = [0] * len(g.rules)
    for rid in rules:
        if not 0 <= rid < len(g.rules):
            raise ValueError(f"rule id {rid} out of range for grammar with {len(g.rules)} rules")
        counts[rid] += 1
    return tuple(counts)


def score_counts(g: Grammar, counts) -> float:
    """Canonical log probability of a (partial) derivation from its counts."""
    lp = g.log_probs
    return sum(c * lp[i] for i, c in enumerate(counts) if c)


def derivation_probability(g: Grammar, d: Derivation) -> float:
    """Log probability of a derivation: sum of N(rule, d) * log p(rule)."""
    return score_counts(g, count_vector(g, d.rules))


def rule_counts(g: Grammar, d: Derivation) -> RuleCounts:
    counts = count_vector(g, d.rules)
    per_nt = {nt: 0 for nt in g.nonterminals}
    for rule, c in zip(g.rules, counts):
        per_nt[rule.lhs] += c
    return RuleCounts({rid: c for rid, c in enumerate(counts)}, per_nt)


def replay_derivation(g: Grammar, rules) -> list[str]:
    """Expand a rule sequence as a leftmost derivation; returns the tokens.

    Raises ValueError if the sequence is not a complete leftmost derivation
    from the start symbol.
    """
    stack = [g.start]  # leftmost pending nonterminal on top
    tokens: list[str] = []
    for rid in rules:
        if not 0 <= rid < len(g.rules):
            raise ValueError(f"rule id {rid} out of range")
        rule = g.rules[rid]
        if not stack:
            raise ValueError(f"rule {rule} applied after the derivation completed")
        top = stack.pop()
        if top != rule.lhs:
            raise ValueError(f"rule {rule} cannot rewrite pending nonterminal {top}")
        if rule.is_lexical:
            tokens.append(rule.terminal)
        else:
            stack.append(rule.rhs[1])
            stack.append(rule.rhs[0])
    if stack:
        raise ValueError(f"derivation incomplete; pending nonterminals {stack[::-1]}")
    return tokens


def derivation_spans(g: Grammar, d: Derivation) -> frozenset[tuple[int, int]]:
    """Half-open token spans of every constituent in the derivation's tree."""
    spans: list[tuple[int, int]] = []
    seq = list(d.rules)
    pos = 0
    cursor = 0

    def walk(expected_lhs: str) -> None:
        nonlocal pos, cursor
        rule = g.rules[seq[pos]]
        pos += 1
        if rule.lhs != expected_lhs:
            raise ValueError(f"rule {rule} cannot rewrite pending nonterminal {expected_lhs}")
        start = cursor
        if rule.is_lexical:
            cursor += 1
        else:
            walk(rule.rhs[0])
            walk(rule.rhs[1])
        spans.append((start, cursor))

    walk(g.start)
    if pos != len(seq) or cursor != d.sentence_len:
        raise ValueError("rule sequence is not a complete derivation of the sentence")
    return frozenset(spans)


def derivation_tree(g: Grammar, d: Derivation):
    """Nested ``(label, children)`` tuples for the derivation's parse tree."""
    seq = list(d.rules)
    pos = 0

    def build(expected_lhs: str):
        nonlocal pos
        rule = g.rules[seq[pos]]
        pos += 1
        if rule.lhs != expected_lhs:
            raise ValueError(f"rule {rule} cannot rewrite pending nonterminal {expected_lhs}")
        if rule.is_lexical:
            return (rule.lhs, (rule.terminal,))
        return (rule.lhs, (build(rule.rhs[0]), build(rule.rhs[1])))

    tree = build(g.start)
    if pos != len(seq):
        raise ValueError("trailing rules beyond a complete derivation")
    return tree


def format_tree(tree) -> str:
    """Render a ``(label, children)`` tree as a bracketed string."""
    label, children = tree
    parts = [format_tree(c) if isinstance(c, tuple) else c for c in children]
    return f"({label} {' '.join(parts)})"

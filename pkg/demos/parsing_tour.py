#!/usr/bin/env python3
"""Chart parsing tour: inside mass, best derivations, n-best, brackets.

A small ambiguous grammar over {a, b} shows how the derivation space of a
sentence is measured (inside), searched (Viterbi, n-best), and constrained
(bracketings), and how the shipped brute-force enumeration cross-checks
all of it.
"""
import math

from pcfgtk import (
    Bracketing,
    derivation_tree,
    enumerate_derivations,
    format_tree,
    inside,
    nbest,
    parse_bracketed_sentence,
    parse_grammar,
    viterbi,
)

GRAMMAR = """
# an ambiguous fragment: S spans can split anywhere
S -> S S 0.25
S -> A B 0.35
S -> a  0.4
A -> A A 0.2
A -> a  0.8
B -> b  1.0
"""

g = parse_grammar(GRAMMAR)
sentence = "a a b".split()

print("=" * 72)
print("Grammar")
print("=" * 72)
for rule, p in zip(g.rules, g.probs):
    print(f"  {rule}   [{p}]")

print()
print("=" * 72)
print(f"All derivations of {' '.join(sentence)!r} (brute force)")
print("=" * 72)
enum = enumerate_derivations(g, sentence)
for d in enum.derivations:
    print(f"  p = {math.exp(d.log_prob):.6g}   {format_tree(derivation_tree(g, d))}")
print(f"  string probability: {math.exp(enum.total_log_prob):.6g}")

print()
print("=" * 72)
print("Inside and Viterbi agree with the enumeration")
print("=" * 72)
chart = inside(g, sentence)
best = viterbi(g, sentence)
print(f"  inside  log P(x)      = {chart.log_string_prob:.12g}")
print(f"  enum    log sum       = {enum.total_log_prob:.12g}")
print(f"  viterbi log max       = {best[1]:.12g}")
print(f"  viterbi tree          = {format_tree(derivation_tree(g, best[0]))}")

print()
print("=" * 72)
print("n-best enumerates the same space in order")
print("=" * 72)
for rank, d in enumerate(nbest(g, sentence, 10).derivations, 1):
    print(f"  #{rank}  p = {math.exp(d.log_prob):.6g}   {format_tree(derivation_tree(g, d))}")

print()
print("=" * 72)
print("Brackets prune derivations whose constituents would cross")
print("=" * 72)
for brackets, label in (
    (Bracketing(), "no brackets"),
    (Bracketing(frozenset({(0, 2)})), "( (a a) b )"),
    (Bracketing(frozenset({(1, 3)})), "( a (a b) )"),
):
    constrained = inside(g, sentence, brackets)
    survivors = nbest(g, sentence, 10, brackets)
    print(f"  {label:<12} -> {len(survivors.derivations)} derivation(s), "
          f"log mass {constrained.log_string_prob:.12g}")

print()
print("=" * 72)
print("Bracketed corpus lines carry their own constraints")
print("=" * 72)
line = "( ( a a ) b )"
sent = parse_bracketed_sentence(line)
print(f"  line   : {line}")
print(f"  tokens : {' '.join(sent.tokens)}")
print(f"  spans  : {sorted(sent.brackets.spans)}")
d, lp = viterbi(g, sent.tokens, sent.brackets)
print(f"  constrained viterbi: {format_tree(derivation_tree(g, d))}  (log p = {lp:.12g})")

print()
print("=" * 72)
print("Sentences outside the language are reported, not raised")
print("=" * 72)
chart = inside(g, ["b", "a"])
print(f"  'b a': in_language = {chart.in_language}, log mass = {chart.log_string_prob}")

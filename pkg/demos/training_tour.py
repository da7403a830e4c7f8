#!/usr/bin/env python3
"""Training tour: the estimator family across its selector grid.

One corpus, one starting grammar, several ways to pick the reference and
competing derivation sets, and a sweep over the discrimination weight h.
The per-iteration report shows the objective climbing and the spectral
radius of every intermediate grammar.
"""
from pcfgtk import (
    DeltaSpec,
    HParams,
    accumulate,
    check_consistency,
    compute_ctilde,
    growth_step,
    parse_grammar,
    train,
)

GRAMMAR = """
S -> S S 0.45
S -> A S 0.15
S -> a  0.4
A -> a  0.6
A -> b  0.4
"""

CORPUS = [
    "a a".split(),
    "a a a".split(),
    "b a a".split(),
    "a b a a".split(),
]

g0 = parse_grammar(GRAMMAR)
print("starting grammar (spectral radius "
      f"{check_consistency(g0).spectral_radius:.3f}, {check_consistency(g0).verdict}):")
for rule, p in zip(g0.rules, g0.probs):
    print(f"  {rule}   [{p}]")
print(f"corpus: {[' '.join(s) for s in CORPUS]}")

print()
print("=" * 72)
print("1. Selector grid at h = 0.4")
print("=" * 72)
specs = {
    "best vs all     ": DeltaSpec("viterbi", "all"),
    "best vs 5-best  ": DeltaSpec("viterbi", "nbest", n_comp=5),
    "2-best vs all   ": DeltaSpec("nbest", "all", n_ref=2),
    "2-best vs 5-best": DeltaSpec("nbest", "nbest", n_ref=2, n_comp=5),
}
params = HParams(h=0.4, epsilon=1.0, max_iters=30)
for label, spec in specs.items():
    report = train(g0, CORPUS, spec, params)
    last = report.records[-1]
    print(f"  {label}: {len(report.records):>2} iters, "
          f"objective {report.records[0].log_objective:+.6f} -> {last.log_objective:+.6f}, "
          f"radius {last.spectral_radius:.3f}, converged={report.converged}")

print()
print("=" * 72)
print("2. Sweep over the discrimination weight h (best vs all)")
print("=" * 72)
spec = DeltaSpec("viterbi", "all")
acc = accumulate(g0, CORPUS, spec)
print(f"  {'h':>5} {'one-step p(S->SS)':>18} {'iters to converge':>18} "
      f"{'final p(S->SS)':>15}")
for h in (0.0, 0.2, 0.4, 0.6, 0.8):
    ct = compute_ctilde(acc, g0, h, 1.0)
    one_step = growth_step(g0, acc, h, ct)
    report = train(g0, CORPUS, spec, HParams(h=h, epsilon=1.0, max_iters=80))
    print(f"  {h:>5.2f} {one_step.probs[0]:>18.6f} {len(report.records):>18} "
          f"{report.final_grammar.probs[0]:>15.6f}")
print("""
  The competing term acts as a brake on reestimation.  A single step moves
  the probabilities less as h grows (at the h=1 boundary it is the
  identity), and reaching the fixed point takes more iterations; with
  best-vs-all selection on this corpus every h converges to the same
  relative-frequency attractor, along a more conservative path.
""")

print("=" * 72)
print("3. The per-iteration report of one run")
print("=" * 72)
report = train(g0, CORPUS, spec, HParams(h=0.6, epsilon=1.0, max_iters=8, rel_tol=0.0))
print("  " + report.CSV_HEADER)
for r in report.records:
    print(f"  {r.iteration},{r.log_objective:.9f},{r.ctilde:.3g},"
          f"{r.max_delta_p:.3e},{r.spectral_radius:.6f},{r.skipped}")
print(f"\nfinal grammar after {len(report.records)} iterations:")
for rule, p in zip(report.final_grammar.rules, report.final_grammar.probs):
    print(f"  {rule}   [{p:.12g}]")

"""Consistency analysis of a PCFG via its nonterminal expectation matrix.

A proper PCFG defines a probability distribution over complete derivations
only if generation terminates with probability 1; that holds when the
spectral radius of the expectation matrix M, where M[A][B] is the expected
number of B symbols produced by one rewrite of A, is below 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grammar import Grammar

POWER_ITERATION_CAP = 10_000
POWER_ITERATION_TOL = 1e-12


@dataclass(frozen=True)
class ConsistencyReport:
    spectral_radius: float
    verdict: str  # "consistent" | "borderline" | "inconsistent"
    iterations: int
    converged: bool


def expectation_matrix(g: Grammar) -> np.ndarray:
    """M[A][B] = sum over rules A -> alpha of p * (occurrences of B in alpha).

    Rows and columns follow ``g.nonterminals`` order.  In CNF only binary
    rules contribute, so each entry is at most twice the binary mass of A.
    """
    n = len(g.nonterminals)
    m = np.zeros((n, n))
    idx = g.nt_index
    for rule in g.binary_rules:
        a = idx[rule.lhs]
        p = g.probs[rule.id]
        for child in rule.rhs:
            m[a, idx[child]] += p
    return m


def _has_cycle(m: np.ndarray) -> bool:
    """Cycle in the nonzero-pattern digraph; for nonnegative M this is
    exactly the condition for a positive spectral radius (else M is
    nilpotent and the radius is 0)."""
    n = m.shape[0]
    color = [0] * n  # 0 new, 1 on stack, 2 done
    for root in range(n):
        if color[root]:
            continue
        stack = [(root, 0)]
        color[root] = 1
        while stack:
            node, child = stack[-1]
            advanced = False
            for nxt in range(child, n):
                if m[node, nxt] == 0.0:
                    continue
                stack[-1] = (node, nxt + 1)
                if color[nxt] == 1:
                    return True
                if color[nxt] == 0:
                    color[nxt] = 1
                    stack.append((nxt, 0))
                advanced = True
                break
            if not advanced:
                color[node] = 2
                stack.pop()
    return False


def check_consistency(g: Grammar, tol: float = 1e-9) -> ConsistencyReport:
    """Classify a grammar as consistent, borderline, or inconsistent.

    A grammar whose nonterminal dependencies are acyclic has a nilpotent
    expectation matrix and spectral radius exactly 0; that case is resolved
    structurally.  Otherwise the radius is found by power iteration with a
    deterministic all-ones start vector.  Iteration runs on M + I (same
    eigenvectors, eigenvalues shifted by +1), which has a positive diagonal
    and therefore cannot cycle on periodic structures; the shift is
    subtracted off the estimate.  A run that fails to settle within the cap
    yields a borderline verdict with ``converged=False``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    base = expectation_matrix(g)
    if not _has_cycle(base):
        return ConsistencyReport(0.0, "consistent", 0, True)
    m = base + np.eye(len(g.nonterminals))
    v = np.ones(len(g.nonterminals))
    estimate = None
    converged = False
    iterations = 0
    for iterations in range(1, POWER_ITERATION_CAP + 1):
        w = m @ v
        norm = float(np.max(w))
        previous, estimate = estimate, norm
        v = w / norm
        if previous is not None and abs(estimate - previous) <= POWER_ITERATION_TOL * max(1.0, estimate):
            converged = True
            break
    rho = estimate - 1.0
    if not converged:
        verdict = "borderline"
    elif rho < 1.0 - tol:
        verdict = "consistent"
    elif rho > 1.0 + tol:
        verdict = "inconsistent"
    else:
        verdict = "borderline"
    return ConsistencyReport(rho, verdict, iterations, converged)

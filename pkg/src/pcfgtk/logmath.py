"""Log-domain scalar helpers for the chart and estimator inner loops."""
from __future__ import annotations

import math

NEG_INF = float("-inf")


def logsumexp(values) -> float:
    """log(sum(exp(v))) over a sequence, stable for widely scaled values."""
    m = max(values, default=NEG_INF)
    if m == NEG_INF:
        return NEG_INF
    return m + math.log(sum(math.exp(v - m) for v in values))


def normalized_weights(log_values) -> list[float]:
    """exp(v) / sum(exp(v)) in division form, so exact ties stay exact."""
    m = max(log_values)
    ws = [math.exp(v - m) for v in log_values]
    total = sum(ws)
    return [w / total for w in ws]

"""Independent reference implementations used as test oracles.

Everything here is deliberately naive: tuple-keyed counters and direct
per-word summation, with no code shared with the package internals, so the
fast implementations are checked against a genuinely different path.
"""

from collections import Counter
import math


def windows(data, m):
    """All (x_t, x_{t-1}, ..., x_{t-m}) tuples, t = m..N-1."""
    return [tuple(data[t - i] for i in range(m + 1)) for t in range(m, len(data))]


def tables(data, m):
    """Naive (full, left, right, mid) counters with derived marginals."""
    full = Counter(windows(data, m))
    left, right, mid = Counter(), Counter(), Counter()
    for w, c in full.items():
        left[w[:-1]] += c
        right[w[1:]] += c
        mid[w[1:-1]] += c
    return full, left, right, mid


def entropy(counter, total):
    return -sum((c / total) * math.log(c / total) for c in counter.values() if c)


def cmi_direct_sum(data, m):
    """CMI as a single sum of per-word log-ratios (not four entropies)."""
    full, left, right, mid = tables(data, m)
    nm = len(data) - m
    total = 0.0
    for w, c in full.items():
        cond_full = c / right[w[1:]]
        cond_drop = left[w[:-1]] / mid[w[1:-1]]
        total += (c / nm) * math.log(cond_full / cond_drop)
    return total


def cmi_variance(data, m, value):
    """Brute-force error-propagation variance over observed words."""
    full, left, right, mid = tables(data, m)
    nm = len(data) - m
    acc = 0.0
    for w, c in full.items():
        q = c / nm
        term = (-math.log(q) + math.log(left[w[:-1]] / nm)
                + math.log(right[w[1:]] / nm)
                - math.log(mid[w[1:-1]] / nm) + value)
        acc += term * term * q * (1.0 - q)
    return acc / nm


def mutual_information(data, m):
    nm = len(data) - m
    pairs = Counter((data[t], data[t - m]) for t in range(m, len(data)))
    x = Counter(); y = Counter()
    for (a, b), c in pairs.items():
        x[a] += c
        y[b] += c
    total = 0.0
    for (a, b), c in pairs.items():
        total += (c / nm) * math.log(c * nm / (x[a] * y[b]))
    return total


def log_likelihood(data, k):
    n = len(data)
    if k == 0:
        marg = Counter(data)
        return sum(c * math.log(c / n) for c in marg.values())
    ctx_next = Counter(); ctx = Counter()
    for t in range(k, n):
        c = tuple(data[t - k:t])
        ctx_next[(c, data[t])] += 1
        ctx[c] += 1
    return sum(c * math.log(c / ctx[w]) for (w, _), c in ctx_next.items())


def ps_fluctuation(data, alphabet_size, k, j_max):
    """Naive Peres-Shields fluctuation with shared start-anchored windows."""
    n_win = len(data) - j_max
    counts = {}
    for length in range(1, j_max + 2):
        counts[length] = Counter(
            tuple(data[t:t + length]) for t in range(n_win))
    worst = 0.0
    for j in range(k + 1, j_max + 1):
        for v, n_v in counts[j].items():
            suffix = v[j - k:]
            denom = n_win if k == 0 else counts[k][suffix]
            for b in range(alphabet_size):
                actual = counts[j + 1].get(v + (b,), 0)
                ref = counts[k + 1].get(suffix + (b,), 0)
                worst = max(worst, abs(actual - n_v * ref / denom))
    return worst


def all_binary_sequences(n):
    """Every K=2 sequence of length n."""
    for bits in range(1 << n):
        yield [(bits >> i) & 1 for i in range(n)]

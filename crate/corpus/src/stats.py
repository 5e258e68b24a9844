# Descriptive statistics over plain lists.
import math


def mean(xs):
    return sum(xs) / len(xs) if xs else float("nan")


def variance(xs, ddof=1):
    m = mean(xs)
    return sum((x - m) ** 2 for x in xs) / (len(xs) - ddof) if len(xs) > ddof else 0.0


def quantile(xs, q):
    s = sorted(xs)
    pos = (len(s) - 1) * min(max(q, 0.0), 1.0)
    lo, hi = int(math.floor(pos)), int(math.ceil(pos))
    return s[lo] + (s[hi] - s[lo]) * (pos - lo)


def covariance(xs, ys):
    mx, my = mean(xs), mean(ys)
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / (len(xs) - 1)


def correlation(xs, ys):
    d = math.sqrt(variance(xs) * variance(ys))
    return covariance(xs, ys) / d if d > 0 else 0.0


def linear_fit(xs, ys):
    slope = covariance(xs, ys) / variance(xs)
    return slope, mean(ys) - slope * mean(xs)


def histogram(xs, bins=10):
    lo, hi = min(xs), max(xs)
    width = (hi - lo) / bins or 1.0
    counts = [0] * bins
    for x in xs:
        counts[min(int((x - lo) / width), bins - 1)] += 1
    return [(lo + i * width, lo + (i + 1) * width, c) for i, c in enumerate(counts)]


def zscores(xs):
    m, s = mean(xs), math.sqrt(variance(xs))
    return [(x - m) / s if s else 0.0 for x in xs]


def moving_average(xs, k):
    return [mean(xs[max(0, i - k + 1): i + 1]) for i in range(len(xs))]


def summary(xs):
    return {
        "n": len(xs),
        "mean": round(mean(xs), 4),
        "sd": round(math.sqrt(variance(xs)), 4),
        "min": min(xs),
        "median": quantile(xs, 0.5),
        "max": max(xs),
        "iqr": quantile(xs, 0.75) - quantile(xs, 0.25),
    }


def outliers(xs, fence=1.5):
    q1, q3 = quantile(xs, 0.25), quantile(xs, 0.75)
    spread = fence * (q3 - q1)
    return [x for x in xs if x < q1 - spread or x > q3 + spread]

#!/usr/bin/env python3
"""Brute-force IBM Model 1 EM used to freeze expected values in the C++ tests.

Works on explicit dictionaries, enumerating every (cond position, out
position) pair per sentence; shares no code with the C++ trainer.
"""
import math
from collections import defaultdict

NULL = "<null>"


def train(corpus, iterations):
    """corpus: list of (cond_words, out_words). Returns (t, loglik trace)."""
    cooc = defaultdict(set)
    for cond, out in corpus:
        for o in out:
            cooc[NULL].add(o)
            for c in cond:
                cooc[c].add(o)
    t = {(c, o): 1.0 / len(outs) for c, outs in cooc.items() for o in outs}

    def loglik():
        ll = 0.0
        for cond, out in corpus:
            full = [NULL] + cond
            for o in out:
                ll += math.log(sum(t[(c, o)] for c in full) / len(full))
        return ll

    trace = []
    for _ in range(iterations):
        trace.append(loglik())
        counts = defaultdict(float)
        for cond, out in corpus:
            full = [NULL] + cond
            for o in out:
                z = sum(t[(c, o)] for c in full)
                for c in full:
                    counts[(c, o)] += t[(c, o)] / z
        totals = defaultdict(float)
        for (c, o), v in counts.items():
            totals[c] += v
        t = {(c, o): v / totals[c] for (c, o), v in counts.items()}
    trace.append(loglik())
    return t, trace


if __name__ == "__main__":
    # c_given_a: conditioning on the English side.
    toy = [(["the", "house"], ["la", "maison"]), (["the", "flower"], ["la", "fleur"])]
    t, trace = train(toy, 10)
    for key in [("the", "la"), ("the", "maison"), ("the", "fleur"), ("house", "maison"),
                ("house", "la"), (NULL, "la"), (NULL, "maison")]:
        print("t(%s -> %s) = %.17g" % (key[0], key[1], t[key]))
    print("trace", " ".join("%.17g" % v for v in trace))
    t1, _ = train([(["yes"], ["oui"])], 1)
    print("oui/yes one step:", t1)

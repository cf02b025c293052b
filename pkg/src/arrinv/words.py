"""Free-group words as tuples of signed generator indices (1-based)."""

from __future__ import annotations


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(word):
    return tuple(-x for x in reversed(word))


def concat(*words):
    return free_reduce(tuple(x for w in words for x in w))


def conjugate(g, w):
    """g w g^-1"""
    return concat(g, w, inverse(g))


def commutator(a, b):
    """[a, b] = a b a^-1 b^-1"""
    return concat(a, b, inverse(a), inverse(b))


def exponent_sums(word, r):
    e = [0] * (r + 1)
    for x in word:
        e[abs(x)] += 1 if x > 0 else -1
    return e[1:]

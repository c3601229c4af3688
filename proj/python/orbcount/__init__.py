"""Integral matrices with a given characteristic polynomial.

Thin wrappers over the C++ library; every call returns the same JSON document
the command-line tool prints, decoded into Python objects.
"""

import json as _json

from . import _core

__all__ = [
    "order",
    "orbital",
    "fl_check",
    "zeta_order",
    "satake",
    "delta",
    "constant",
    "count_points",
    "count_points_bruteforce",
    "census",
    "analytic",
]


def _poly(p):
    if isinstance(p, str):
        return p
    return ",".join(str(int(c)) for c in p)


def order(poly, primes=()):
    return _json.loads(_core.order(_poly(poly), list(primes)))


def orbital(poly, p, twist_order=1, ramified=False):
    return _json.loads(_core.orbital(_poly(poly), p, twist_order, ramified))


def fl_check(poly, p, d):
    return _json.loads(_core.fl_check(_poly(poly), p, d))


def zeta_order(poly):
    return _json.loads(_core.zeta_order(_poly(poly)))


def satake(n, d, jmax=12):
    return _json.loads(_core.satake(n, d, jmax))


def delta(p, e_degree, kind, arg, precision=8):
    return _json.loads(_core.delta(p, e_degree, kind, arg, precision))


def constant(poly, mode="Q", invariants=None):
    text = "" if invariants is None else _json.dumps(invariants)
    return _json.loads(_core.constant(_poly(poly), mode, text))


def count_points(poly, T, threads=1):
    return _core.count_points(_poly(poly), T, threads)


def count_points_bruteforce(poly, T):
    return _core.count_points_bruteforce(_poly(poly), T)


def census(poly, tmax, tmin=10.0, threads=1):
    return _json.loads(_core.census(_poly(poly), tmax, tmin, threads))


def analytic(n):
    return _json.loads(_core.analytic(n))

"""Buchberger machinery shared by the commutative and the Weyl-algebra layers.

Elements of a free module ``A^r`` are plain dicts mapping ``(pos, exps)`` to
``Fraction`` coefficients.  Ideals are the case ``r = 1`` (``pos`` always 0).
The algebra only enters through left multiplication of a monomial onto an
element, so the same code serves ``Q[x]`` and the Weyl algebra, where the
leading term of ``m * g`` is ``m * lt(g)`` for every multiplicative order.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from itertools import product
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple

Term = Tuple[int, Tuple[int, ...]]
Element = Dict[Term, Fraction]
ModuleKey = Callable[[int, Tuple[int, ...]], tuple]


class CommutativeAlgebra:
    commutative = True

    def __init__(self, nvars: int):
        self.nvars = nvars

    def mulmono(self, mono: Tuple[int, ...], elem: Element) -> Element:
        if not any(mono):
            return dict(elem)
        return {(p, tuple(a + b for a, b in zip(mono, e))): c for (p, e), c in elem.items()}


def _falling(c: int, k: int) -> int:
    r = 1
    for i in range(k):
        r *= c - i
    return r


class WeylAlgebraCore:
    """Left multiplication in the n-th Weyl algebra.

    Exponent tuples have length 2n: x-exponents followed by d-exponents, and
    every stored element is in normal form (x's to the left of d's).
    """

    commutative = False

    def __init__(self, n: int):
        self.n = n
        self.nvars = 2 * n

    def mulmono(self, mono: Tuple[int, ...], elem: Element) -> Element:
        n = self.n
        a, b = mono[:n], mono[n:]
        if not any(b):
            return {(p, tuple(ai + ci for ai, ci in zip(a, e[:n])) + tuple(bi + di for bi, di in zip(b, e[n:]))): c
                    for (p, e), c in elem.items()}
        out: Element = {}
        for (p, e), c in elem.items():
            for exps, coef in self.mono_product(a, b, e[:n], e[n:]):
                key = (p, exps)
                v = out.get(key, 0) + c * coef
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return out

    @staticmethod
    def mono_product(a, b, c, d):
        """Normal form of x^a d^b * x^c d^d as (exps, int coefficient) pairs."""
        # d_i^b x_i^c = sum_k C(b,k) c!/(c-k)! x_i^(c-k) d_i^(b-k)
        ranges = [range(min(bi, ci) + 1) for bi, ci in zip(b, c)]
        for ks in product(*ranges):
            coef = 1
            for bi, ci, k in zip(b, c, ks):
                if k:
                    coef *= comb(bi, k) * _falling(ci, k)
            xs = tuple(ai + ci - k for ai, ci, k in zip(a, c, ks))
            ds = tuple(bi + di - k for bi, di, k in zip(b, d, ks))
            yield xs + ds, coef


def lead(elem: Element, key: ModuleKey) -> Term:
    return max(elem, key=lambda t: key(*t))


def add_scaled(target: Element, other: Element, scale: Fraction) -> None:
    """In-place ``target += scale * other``."""
    for t, c in other.items():
        v = target.get(t, 0) + scale * c
        if v:
            target[t] = v
        else:
            target.pop(t, None)


def divides(a: Tuple[int, ...], b: Tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monic(elem: Element, key: ModuleKey) -> Element:
    if not elem:
        return elem
    c = elem[lead(elem, key)]
    if c == 1:
        return dict(elem)
    inv = 1 / Fraction(c)
    return {t: v * inv for t, v in elem.items()}


class _Basis:
    """Basis elements together with their cached leading data."""

    def __init__(self, key: ModuleKey):
        self.key = key
        self.elems: List[Element] = []
        self.leads: List[Term] = []
        self.lcs: List[Fraction] = []

    def append(self, g: Element) -> int:
        lt = lead(g, self.key)
        self.elems.append(g)
        self.leads.append(lt)
        self.lcs.append(Fraction(g[lt]))
        return len(self.elems) - 1

    def find_divisor(self, t: Term, skip=()) -> Optional[int]:
        pos, e = t
        for i, (p, le) in enumerate(self.leads):
            if p == pos and i not in skip and divides(le, e):
                return i
        return None


def reduce(elem: Element, basis: Sequence[Element], alg, key: ModuleKey, full: bool = True) -> Element:
    """Normal form of ``elem`` with respect to ``basis`` (left division)."""
    b = basis if isinstance(basis, _Basis) else _make_basis(basis, key)
    return _reduce(elem, b, alg, key, full)


def _make_basis(elems: Sequence[Element], key: ModuleKey) -> _Basis:
    b = _Basis(key)
    for g in elems:
        if g:
            b.append(g)
    return b


def _reduce(elem: Element, b: _Basis, alg, key: ModuleKey, full: bool = True, skip=()) -> Element:
    p = dict(elem)
    rem: Element = {}
    while p:
        lt = lead(p, key)
        i = b.find_divisor(lt, skip)
        if i is None:
            if not full:
                rem.update(p)
                return rem
            rem[lt] = p.pop(lt)
            continue
        q = tuple(x - y for x, y in zip(lt[1], b.leads[i][1]))
        add_scaled(p, alg.mulmono(q, b.elems[i]), -Fraction(p[lt]) / b.lcs[i])
    return rem


def reduce_tracked(elem: Element, basis: Sequence[Element], alg, key: ModuleKey):
    """Full reduction returning ``(remainder, quotients)`` with
    ``elem = sum quotients[i] * basis[i] + remainder``; quotients are ring elements."""
    b = _make_basis(basis, key)
    idx = [i for i, g in enumerate(basis) if g]
    quots: List[Element] = [{} for _ in basis]
    p = dict(elem)
    rem: Element = {}
    while p:
        lt = lead(p, key)
        i = b.find_divisor(lt)
        if i is None:
            rem[lt] = p.pop(lt)
            continue
        q = tuple(x - y for x, y in zip(lt[1], b.leads[i][1]))
        c = -Fraction(p[lt]) / b.lcs[i]
        add_scaled(p, alg.mulmono(q, b.elems[i]), c)
        add_scaled(quots[idx[i]], {(0, q): Fraction(1)}, -c)
    return rem, quots


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def spoly(f: Element, lf: Term, g: Element, lg: Term, alg) -> Element:
    m = _lcm(lf[1], lg[1])
    s = alg.mulmono(tuple(x - y for x, y in zip(m, lf[1])), f)
    cf, cg = Fraction(f[lf]), Fraction(g[lg])
    s = {t: c / cf for t, c in s.items()}
    add_scaled(s, alg.mulmono(tuple(x - y for x, y in zip(m, lg[1])), g), -1 / cg)
    return s


def _degree(elem: Element) -> int:
    return max(sum(e) for _, e in elem)


def groebner(gens: Sequence[Element], alg, key: ModuleKey, product_criterion: bool = False) -> List[Element]:
    """Reduced monic Groebner basis, sorted by decreasing leading term.

    Pairs are selected by sugar degree, then by the order of their lcm.
    ``product_criterion`` may only be set for ideals of a commutative ring.
    """
    b = _Basis(key)
    sugar: List[int] = []
    pairs: list = []
    counter = 0

    def add(g, s):
        nonlocal counter
        j = b.append(g)
        sugar.append(s)
        for i in range(j):
            if b.leads[i][0] != b.leads[j][0]:
                continue
            li, lj = b.leads[i][1], b.leads[j][1]
            if product_criterion and all(min(x, y) == 0 for x, y in zip(li, lj)):
                continue
            m = _lcm(li, lj)
            ps = max(sugar[i] + sum(m) - sum(li), sugar[j] + sum(m) - sum(lj))
            counter += 1
            heapq.heappush(pairs, (ps, key(b.leads[i][0], m), counter, i, j))

    for g in gens:
        if g:
            g = _reduce(g, b, alg, key)
            if g:
                add(monic(g, key), _degree(g))
    done = set()
    while pairs:
        ps, _, _, i, j = heapq.heappop(pairs)
        if _chain_skip(b, i, j, done):
            done.add((i, j))
            continue
        done.add((i, j))
        s = spoly(b.elems[i], b.leads[i], b.elems[j], b.leads[j], alg)
        r = _reduce(s, b, alg, key)
        if r:
            add(monic(r, key), max(ps, _degree(r)))
    return _reduced(b, alg, key)


def _chain_skip(b: _Basis, i: int, j: int, done: set) -> bool:
    # Buchberger's chain criterion: (i, j) is redundant if some k has lt(k) | lcm(i, j)
    # and both (i, k), (j, k) were already treated.
    pos = b.leads[i][0]
    m = _lcm(b.leads[i][1], b.leads[j][1])
    for k, (p, le) in enumerate(b.leads):
        if k in (i, j) or p != pos or not divides(le, m):
            continue
        if (min(i, k), max(i, k)) in done and (min(j, k), max(j, k)) in done:
            return True
    return False


def _reduced(b: _Basis, alg, key: ModuleKey) -> List[Element]:
    idx = list(range(len(b.elems)))
    keep = []
    for i in idx:
        pi, li = b.leads[i]
        redundant = False
        for j in idx:
            if j == i or b.leads[j][0] != pi or not divides(b.leads[j][1], li):
                continue
            # equal leads: keep the earliest one only
            if b.leads[j][1] != li or j < i:
                redundant = True
                break
        if not redundant:
            keep.append(i)
    mb = _Basis(key)
    for i in keep:
        mb.append(b.elems[i])
    out = []
    for k in range(len(mb.elems)):
        r = _reduce(mb.elems[k], mb, alg, key, skip=(k,))
        out.append(monic(r, key))
    out.sort(key=lambda g: key(*lead(g, key)), reverse=True)
    return out


def lifted(gens: Sequence[Element], rank: int, alg, key: ModuleKey):
    """Groebner basis of the module generated by ``gens`` with cofactor tracking.

    Each generator ``g_i`` of ``A^rank`` is extended by the unit vector
    ``e_{rank+i}``; with an order eliminating the first ``rank`` positions the
    Groebner basis splits into

    * elements with a nonzero original part: (gb element, cofactors) pairs,
    * elements supported on tracking positions only: syzygies of ``gens``.

    Returns ``(gb_with_cofactors, syzygies)`` where every vector is a dict
    keyed by ``(pos, exps)`` with positions re-based to start at 0.
    """
    k = len(gens)
    aug = []
    nvars = alg.nvars
    zero = (0,) * nvars
    for i, g in enumerate(gens):
        e = dict(g)
        e[(rank + i, zero)] = Fraction(1)
        aug.append(e)

    def ekey(pos, exps):
        return (1 if pos < rank else 0,) + key(pos if pos < rank else pos - rank, exps)

    gb = groebner(aug, alg, ekey)
    with_cof, syz = [], []
    for g in gb:
        orig = {t: c for t, c in g.items() if t[0] < rank}
        track = {(p - rank, e): c for (p, e), c in g.items() if p >= rank}
        if orig:
            with_cof.append((orig, track))
        else:
            syz.append(track)
    return with_cof, syz

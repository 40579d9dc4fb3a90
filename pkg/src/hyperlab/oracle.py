"""Brute-force reference counters used to certify the kernels in counts.

Deliberately naive: inverses are Fermat powers, group elements are built
by generic 2x2 matrix chains (no closed formulas), equalities are found
by comparing all pairs of product lists (no hashing), and membership is
a linear scan.  Shared code with the kernels would defeat the purpose.

Budgets are hard errors, never silent skips.
"""

from .counts import RichCount
from .errors import ResourceLimit
from .sets import ScalarSet, TranslateSet

_ENERGY_MAX_H = 32
_T3_MAX_H = 10
_Q_MAX_H = 32
_MK_MAX_P = 61


def _minv(x: int, p: int) -> int:
    return pow(x, p - 2, p)


def _embed(h, p):
    a, b = h
    return ((-a) % p, (a * b + 1) % p, (-1) % p, b % p)


def _mmul(m, n, p):
    return (
        (m[0] * n[0] + m[1] * n[2]) % p,
        (m[0] * n[1] + m[1] * n[3]) % p,
        (m[2] * n[0] + m[3] * n[2]) % p,
        (m[2] * n[1] + m[3] * n[3]) % p,
    )


def _minvert(m, p):
    # generic inverse: adjugate scaled by det^-1 (Fermat), not assuming det 1
    det = (m[0] * m[3] - m[1] * m[2]) % p
    d = _minv(det, p)
    return (m[3] * d % p, -m[1] * d % p, -m[2] * d % p, m[0] * d % p)


def sigma_naive(A: ScalarSet, H: TranslateSet, lam: int = -1) -> int:
    """Definitional double loop; membership by linear scan over A."""
    p = H.p
    lam = lam % p
    elems = list(A)
    total = 0
    for a, b in H:
        for x in elems:
            if x == b:
                continue
            y = (a + lam * _minv((x - b) % p, p)) % p
            for z in elems:
                if z == y:
                    total += 1
                    break
    return total


def energy_naive(H: TranslateSet) -> int:
    """E(H) by comparing all pairs of the |H|^2 quotient products."""
    n = len(H)
    if n > _ENERGY_MAX_H:
        raise ResourceLimit("energy_naive", required=n, budget=_ENERGY_MAX_H)
    p = H.p
    mats = [_embed(h, p) for h in H]
    invs = [_minvert(m, p) for m in mats]
    products = [_mmul(m1, m2i, p) for m1 in mats for m2i in invs]
    total = 0
    for u in products:
        for v in products:
            if u == v:
                total += 1
    return total


def t3_naive(H: TranslateSet) -> int:
    """T_3(H) by comparing all pairs of the |H|^3 triple products."""
    n = len(H)
    if n > _T3_MAX_H:
        raise ResourceLimit("t3_naive", required=n, budget=_T3_MAX_H)
    p = H.p
    mats = [_embed(h, p) for h in H]
    invs = [_minvert(m, p) for m in mats]
    products = [
        _mmul(_mmul(m1, m2i, p), m3, p) for m1 in mats for m2i in invs for m3 in mats
    ]
    total = 0
    for u in products:
        for v in products:
            if u == v:
                total += 1
    return total


def q_naive(H: TranslateSet) -> int:
    """Q(H) by the definitional quadruple test D(h1,h1') = D(h2,h2')."""
    n = len(H)
    if n > _Q_MAX_H:
        raise ResourceLimit("q_naive", required=n, budget=_Q_MAX_H)
    p = H.p
    ds = [(a - a2) * (b - b2) % p for a, b in H for a2, b2 in H]
    total = 0
    for d1 in ds:
        for d2 in ds:
            if d1 == d2:
                total += 1
    return total


def mk_exhaustive(A: ScalarSet, k: int, lam: int = -1) -> RichCount:
    """m_k by scanning every translate of F_p x F_p."""
    p = A.p
    if p > _MK_MAX_P:
        raise ResourceLimit("mk_exhaustive", required=p, budget=_MK_MAX_P)
    lam = lam % p
    elems = list(A)
    wits = []
    for a in range(p):
        for b in range(p):
            t = 0
            for x in elems:
                if x == b:
                    continue
                y = (a + lam * _minv((x - b) % p, p)) % p
                for z in elems:
                    if z == y:
                        t += 1
                        break
            if t >= k:
                wits.append((a, b))
    return RichCount(k=k, count=len(wits), witnesses=tuple(wits))

"""Exact counting kernels: incidences, energies, rectangular quadruples,
Minkowski realisations, rich curves and lines, and the Cauchy-Schwarz chain.

Every count here is an exact integer; no floating point enters.  Group
quantities (anything built from HH^-1 products) exist only for the curve
constant lambda = -1, where translates embed into SL2.  Keys of the
counting tables are full entry tuples, never hashes of partial state.

Inverses come from extended Euclid (or the O(p) table recurrence); the
brute-force reference loops in the oracle module use Fermat powers
instead, so the two routes share no arithmetic shortcuts.
"""

import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import EmptyInput, InvalidArgument, ModulusMismatch, ResourceLimit
from .field import Fp
from .moebius import INFINITY
from .sets import ScalarSet, TranslateSet

_INV_TABLE_MAX = 1 << 18
_SQRT_TABLE_MAX = 1 << 16


@lru_cache(maxsize=None)
def _fp(p: int) -> Fp:
    return Fp(p)


@lru_cache(maxsize=8)
def _inv_table(p: int) -> list:
    # inv[i] via the classic recurrence; index 0 unused.
    inv = [0] * p
    inv[1] = 1
    for i in range(2, p):
        inv[i] = (p - p // i) * inv[p % i] % p
    return inv


def _inv_fn(p: int):
    """Callable x -> x^-1 mod p for nonzero x; table-backed for small p."""
    if p <= _INV_TABLE_MAX:
        table = _inv_table(p)
        return table.__getitem__
    return _fp(p).inv


@lru_cache(maxsize=8)
def _sqrt_table(p: int) -> dict:
    # value -> smaller square root; residues only.
    roots = {}
    for x in range((p - 1) // 2, -1, -1):
        roots[x * x % p] = x
    return roots


def _sqrt_fn(p: int):
    """Callable x -> a square root of x, or None for non-residues."""
    if p <= _SQRT_TABLE_MAX:
        table = _sqrt_table(p)
        return table.get
    return _fp(p).sqrt


@dataclass(frozen=True)
class Budget:
    """Caps on counting-table sizes and enumeration ranges.

    t3_max_h gates the |H|^3 triple enumeration; t4_support_product gates
    the histogram self-convolution; exhaustive_cells gates full p^2 scans.
    table_entries, when set (HYPERLAB_BUDGET_MB, about 10000 entries per
    MB), additionally caps any single counting table.
    """

    t3_max_h: int = 512
    t4_support_product: int = 4_000_000
    exhaustive_cells: int = 4_200_000
    table_entries: int | None = None

    @staticmethod
    def from_env() -> "Budget":
        mb = os.environ.get("HYPERLAB_BUDGET_MB")
        if mb is None:
            return Budget()
        try:
            entries = int(mb) * 10_000
        except ValueError:
            raise InvalidArgument(f"HYPERLAB_BUDGET_MB must be an integer, got {mb!r}") from None
        return Budget(table_entries=entries)


def _budget(budget: Budget | None) -> Budget:
    return budget if budget is not None else Budget.from_env()


@dataclass(frozen=True)
class CountHistogram:
    """key -> positive count; total mass equals the number of enumerated tuples."""

    entries: dict

    @property
    def total_mass(self) -> int:
        return sum(self.entries.values())

    def __getitem__(self, key) -> int:
        return self.entries.get(key, 0)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class RichCount:
    k: int
    count: int
    witnesses: tuple | None = None


@dataclass(frozen=True)
class CsChainReport:
    sigma: int
    lhs_sq: int
    rhs_cs: int
    delta: Fraction
    omega_size: int
    omega_incidence_share: Fraction


def _check_lambda(p: int, lam: int) -> int:
    lam %= p
    if lam == 0:
        raise InvalidArgument("lambda must be nonzero")
    return lam


def _require_group_lambda(p: int, lam: int):
    if lam % p != p - 1:
        raise InvalidArgument(
            "group-structured counts require lambda = -1 (translates embed into SL2 only there)"
        )


def sigma_rect(B: ScalarSet, C: ScalarSet, H: TranslateSet, lam: int = -1) -> int:
    """Incidences (h, x) with x in B and h(x) in C, poles contributing 0."""
    if not (B.p == C.p == H.p):
        raise ModulusMismatch(f"moduli differ: {B.p}, {C.p}, {H.p}")
    p = H.p
    lam = _check_lambda(p, lam)
    if len(B) == 0 or len(C) == 0 or len(H) == 0:
        return 0
    inv = _inv_fn(p)
    members = C.members
    xs = B.elements
    total = 0
    for a, b in H:
        for x in xs:
            if x == b:
                continue
            # curve form: (x - b)(y - a) = lam
            if (a + lam * inv((x - b) % p)) % p in members:
                total += 1
    return total


def sigma(A: ScalarSet, H: TranslateSet, lam: int = -1) -> int:
    """sigma(A, H) = number of points of A x A on translates in H."""
    return sigma_rect(A, A, H, lam)


def quotient_histogram(H: TranslateSet, projective: bool = False) -> CountHistogram:
    """u -> r_{HH^-1}(u) over all |H|^2 ordered pairs.

    Keys are SL2 entry tuples of the closed-form pair quotient; with
    projective=True the keys are collapsed to canonical form instead
    (counts can only merge, never split).
    """
    p = H.p
    hh = H.elements
    acc = Counter()
    for a1, b1 in hh:
        for a2, b2 in hh:
            w1 = b1 - b2
            acc[
                (
                    (1 + a1 * w1) % p,
                    (a1 - a2 - a1 * a2 * w1) % p,
                    w1 % p,
                    (1 - a2 * w1) % p,
                )
            ] += 1
    if projective:
        inv = _inv_fn(p)
        folded = Counter()
        for key, cnt in acc.items():
            for e in key:
                if e:
                    s = inv(e)
                    folded[tuple(x * s % p for x in key)] += cnt
                    break
        acc = folded
    return CountHistogram(dict(acc))


def _t3_histogram(H: TranslateSet, budget: Budget | None = None) -> Counter:
    """g -> r_{HH^-1H}(g) by direct |H|^3 enumeration of the closed formula."""
    bud = _budget(budget)
    n = len(H)
    if n > bud.t3_max_h:
        raise ResourceLimit("T3 enumeration over |H|^3", required=n, budget=bud.t3_max_h)
    if bud.table_entries is not None and n**3 > bud.table_entries:
        raise ResourceLimit("T3 counting table", required=n**3, budget=bud.table_entries)
    p = H.p
    hh = H.elements
    acc = Counter()
    for a1, b1 in hh:
        for a2, b2 in hh:
            w1 = b1 - b2
            e1base = 1 + a1 * w1
            for a3, b3 in hh:
                w2 = a3 - a2
                ct = 1 + w1 * w2
                act = a1 * ct
                acc[
                    (
                        (-act - w2) % p,
                        (e1base + b3 * (w2 + act)) % p,
                        -ct % p,
                        (w1 + b3 * ct) % p,
                    )
                ] += 1
    return acc


def t_k(H: TranslateSet, k: int, budget: Budget | None = None) -> int:
    """T_k(H) = sum of squared representation counts of alternating
    products h1 h2^-1 h3 ... of length k, at SL2-entry equality."""
    if len(H) == 0:
        return 0
    if k == 2:
        hist = quotient_histogram(H)
        return sum(v * v for v in hist.entries.values())
    if k == 3:
        return sum(v * v for v in _t3_histogram(H, budget).values())
    if k == 4:
        bud = _budget(budget)
        p = H.p
        q2 = quotient_histogram(H).entries
        support = len(q2)
        if support * support > bud.t4_support_product:
            raise ResourceLimit(
                "T4 histogram self-convolution",
                required=support * support,
                budget=bud.t4_support_product,
            )
        items = list(q2.items())
        acc = Counter()
        for (a1, b1, c1, d1), cu in items:
            for (a2, b2, c2, d2), cv in items:
                acc[
                    (
                        (a1 * a2 + b1 * c2) % p,
                        (a1 * b2 + b1 * d2) % p,
                        (c1 * a2 + d1 * c2) % p,
                        (c1 * b2 + d1 * d2) % p,
                    )
                ] += cu * cv
        return sum(v * v for v in acc.values())
    raise InvalidArgument(f"k must be 2, 3 or 4, got {k}")


def d_histogram(H: TranslateSet) -> CountHistogram:
    """d -> number of ordered pairs with D(h, h') = (a-a')(b-b') = d."""
    p = H.p
    hh = H.elements
    acc = Counter()
    for a1, b1 in hh:
        for a2, b2 in hh:
            acc[(a1 - a2) * (b1 - b2) % p] += 1
    return CountHistogram(dict(acc))


def q_rect(H: TranslateSet) -> int:
    """Rectangular quadruples Q(H): pairs of pairs at equal D, as squared masses."""
    return sum(v * v for v in d_histogram(H).entries.values())


def minkowski_grid(A: ScalarSet) -> TranslateSet:
    """The 45-degree image {(x+y, x-y): (x,y) in A x A}; D on it is the
    Minkowski distance on A x A."""
    p = A.p
    return TranslateSet(p, tuple(((x + y) % p, (x - y) % p) for x in A for y in A))


def minkowski_realisations(A: ScalarSet, lam: int) -> int:
    """Ordered pairs of A x A at Minkowski distance (x-x')^2 - (y-y')^2 = lam.

    Computed from the difference histogram of A: sum over dx of
    r(dx) * sum_{dy^2 = dx^2 - lam} r(dy).
    """
    p = A.p
    lam = _check_lambda(p, lam)
    r = Counter((x - y) % p for x in A for y in A)
    sqrt = _sqrt_fn(p)
    total = 0
    for dx, cx in r.items():
        t = (dx * dx - lam) % p
        if t == 0:
            total += cx * r.get(0, 0)
            continue
        s = sqrt(t)
        if s is not None:
            total += cx * (r.get(s, 0) + r.get(p - s, 0))
    return total


def rich_hyperbolae(
    A: ScalarSet,
    k: int,
    lam: int = -1,
    mode: str = "pairs",
    within: TranslateSet | None = None,
    budget: Budget | None = None,
) -> RichCount:
    """m_k: translates (a, b) whose curve (x-b)(y-a) = lam holds >= k
    points of A x A.

    pairs mode solves, per point pair of A x A with distinct coordinates,
    the quadratic for candidate translates; a t-rich translate then shows
    up exactly C(t,2) times.  exhaustive mode scans all p^2 translates.
    Any two distinct points of one curve differ in both coordinates, so
    the pair enumeration misses nothing with t >= 2.
    """
    p = A.p
    lam = _check_lambda(p, lam)
    if mode == "pairs":
        if k < 2:
            raise InvalidArgument("pairs mode needs k >= 2 (translates are found through point pairs)")
        hits = _pair_hits(A, lam)
        thr = k * (k - 1) // 2
        selected = [key for key, c in hits.items() if c >= thr]
        if within is not None:
            wm = within.members
            selected = [key for key in selected if divmod(key, p) in wm]
        wits = tuple(sorted(divmod(key, p) for key in selected))
        return RichCount(k=k, count=len(selected), witnesses=wits)
    if mode == "exhaustive":
        if k < 1:
            raise InvalidArgument(f"k must be >= 1, got {k}")
        bud = _budget(budget)
        cells = len(within) if within is not None else p * p
        if cells > bud.exhaustive_cells:
            raise ResourceLimit("exhaustive translate scan", required=cells, budget=bud.exhaustive_cells)
        inv = _inv_fn(p)
        members = A.members
        xs = A.elements
        translates = within.elements if within is not None else (
            (a, b) for a in range(p) for b in range(p)
        )
        wits = []
        for a, b in translates:
            t = 0
            for x in xs:
                if x == b:
                    continue
                if (a + lam * inv((x - b) % p)) % p in members:
                    t += 1
            if t >= k:
                wits.append((a, b))
        return RichCount(k=k, count=len(wits), witnesses=tuple(sorted(wits)))
    raise InvalidArgument(f"mode must be 'pairs' or 'exhaustive', got {mode!r}")


def _pair_hits(A: ScalarSet, lam: int) -> Counter:
    # key a*p + b -> number of unordered curve-point pairs; equals C(t,2)
    # for a t-rich translate.
    p = A.p
    xs = A.elements
    inv = _inv_fn(p)
    sqrt = _sqrt_fn(p)
    hits = Counter()
    n = len(xs)
    for i in range(n):
        x1 = xs[i]
        for j in range(i + 1, n):
            e = (x1 - xs[j]) % p
            # For P = (x1, y1), Q = (x2, y2) with f = y1 - y2 != 0, the
            # translates through both points solve f*u^2 - ef*u + lam*e = 0
            # in u = x1 - b; discriminant ef(ef - 4 lam).
            cache = {}
            for y1 in xs:
                for y2 in xs:
                    f = (y1 - y2) % p
                    if f == 0:
                        continue
                    roots = cache.get(f)
                    if roots is None:
                        ef = e * f % p
                        disc = ef * (ef - 4 * lam) % p
                        s = sqrt(disc)
                        roots = []
                        if s is not None:
                            inv2f = inv(2 * f % p)
                            for ss in ((s, p - s) if s else (0,)):
                                u = (ef + ss) * inv2f % p
                                # b = x1 - u; a = y1 - lam/u; u != 0 since
                                # the root product lam*e/f is nonzero.
                                roots.append(((x1 - u) % p, lam * inv(u) % p))
                        cache[f] = roots
                    for b, ca in roots:
                        hits[((y1 - ca) % p) * p + b] += 1
    return hits


def rich_lines(
    B: ScalarSet, C: ScalarSet, k: int, include_axis_parallel: bool = True
) -> RichCount:
    """l_k: affine lines (vertical included) holding >= k points of B x C,
    by pair-slope bucketing."""
    if B.p != C.p:
        raise ModulusMismatch(f"moduli differ: {B.p}, {C.p}")
    if k < 2:
        raise InvalidArgument(f"k must be >= 2, got {k}")
    p = B.p
    inv = _inv_fn(p)
    pts = [(x, y) for x in B for y in C]
    hits = Counter()
    for i in range(len(pts)):
        x1, y1 = pts[i]
        for j in range(i + 1, len(pts)):
            x2, y2 = pts[j]
            if x1 == x2:
                hits[("v", x1)] += 1
            else:
                m = (y2 - y1) * inv((x2 - x1) % p) % p
                hits[("s", m, (y1 - m * x1) % p)] += 1
    thr = k * (k - 1) // 2
    selected = [key for key, c in hits.items() if c >= thr]
    if not include_axis_parallel:
        selected = [key for key in selected if key[0] != "v" and key[1] != 0]
    return RichCount(k=k, count=len(selected), witnesses=tuple(sorted(selected)))


def additive_energy(B: ScalarSet) -> int:
    """E_+(B): quadruples with b1 - b2 = b3 - b4."""
    p = B.p
    r = Counter((x - y) % p for x in B for y in B)
    return sum(v * v for v in r.values())


def product_rep_histogram(B: ScalarSet) -> CountHistogram:
    """x -> r_{(B-B)(B-B)}(x), products of differences with multiplicity."""
    p = B.p
    r = Counter((x - y) % p for x in B for y in B)
    items = list(r.items())
    acc = Counter()
    for d1, c1 in items:
        for d2, c2 in items:
            acc[d1 * d2 % p] += c1 * c2
    return CountHistogram(dict(acc))


def product_rep_energy(B: ScalarSet) -> int:
    """sum_x r^2_{(B-B)(B-B)}(x)."""
    return sum(v * v for v in product_rep_histogram(B).entries.values())


# the four equations share the shape (a1 + f(a2,a4)) * (a3 + g(a2,a4)) = 1
_SUMPROD_FACTORS = {
    1: lambda a2, a4, p: (a2, a4),
    2: lambda a2, a4, p: ((a2 - a4) % p, (a2 + a4) % p),
    3: lambda a2, a4, p: (a2, a2 * a4 % p),
    4: lambda a2, a4, p: ((a2 + a4) % p, a2 * a4 % p),
}


def sumprod_quadruples(A: ScalarSet, variant: int) -> int:
    """Solutions in A^4 of the selected quadruple equation."""
    if variant not in _SUMPROD_FACTORS:
        raise InvalidArgument(f"variant must be 1..4, got {variant}")
    shape = _SUMPROD_FACTORS[variant]
    p = A.p
    inv = _inv_fn(p)
    members = A.members
    xs = A.elements
    total = 0
    for a2 in xs:
        for a4 in xs:
            c1, c2 = shape(a2, a4, p)
            for a1 in xs:
                u = (a1 + c1) % p
                if u and (inv(u) - c2) % p in members:
                    total += 1
    return total


def borel_coset_mass(H: TranslateSet) -> tuple[CountHistogram, int]:
    """Bucket squared quotient masses by left Borel coset.

    Returns (label -> sum of r^2 over the coset, max over finite labels).
    The label is u(oo); Borel elements collect under the INFINITY key.
    """
    p = H.p
    inv = _inv_fn(p)
    masses = {}
    for (a, b, c, d), r in quotient_histogram(H).entries.items():
        label = INFINITY if c == 0 else a * inv(c) % p
        masses[label] = masses.get(label, 0) + r * r
    max_nonborel = max((v for lbl, v in masses.items() if lbl is not INFINITY), default=0)
    return CountHistogram(masses), max_nonborel


def borel_t3_mass(H: TranslateSet, budget: Budget | None = None) -> int:
    """Y_B: the part of T_3 carried by upper-triangular products."""
    if len(H) == 0:
        return 0
    return sum(v * v for key, v in _t3_histogram(H, budget).items() if key[2] == 0)


def energy_borel_split(H: TranslateSet) -> tuple[int, int]:
    """E(H) split into (Borel-supported, rest) by quotient key."""
    borel = 0
    rest = 0
    for key, r in quotient_histogram(H).entries.items():
        if key[2] == 0:
            borel += r * r
        else:
            rest += r * r
    return borel, rest


def energy_system_counts(H: TranslateSet) -> tuple[int, int]:
    """Solution counts of the two coordinate systems associated with E(H).

    N1 keys pairs by (a1, a2, b1-b2), N2 by (b1, b2, a1-a2).  Neither is
    asserted equal to E(H); they are reported side by side.
    """
    p = H.p
    hh = H.elements
    n1 = Counter()
    n2 = Counter()
    for a1, b1 in hh:
        for a2, b2 in hh:
            n1[(a1, a2, (b1 - b2) % p)] += 1
            n2[(b1, b2, (a1 - a2) % p)] += 1
    return (sum(v * v for v in n1.values()), sum(v * v for v in n2.values()))


def cs_chain_report(A: ScalarSet, H: TranslateSet, lam: int = -1) -> CsChainReport:
    """Replay of the first Cauchy-Schwarz step: sigma^2 <= |A| sum_u r(u) sigma_u,
    the pigeonhole level Delta = sigma^2 / (3|A||H|^2), and the share of
    the right-hand side carried by Omega = {u: sigma_u >= Delta}."""
    if A.p != H.p:
        raise ModulusMismatch(f"moduli differ: {A.p}, {H.p}")
    if len(A) == 0 or len(H) == 0:
        raise EmptyInput("cs_chain_report needs nonempty A and H")
    p = A.p
    _require_group_lambda(p, lam)
    sig = sigma(A, H, -1)
    inv = _inv_fn(p)
    members = A.members
    xs = A.elements
    total_rs = 0
    pairs = []  # (r(u), sigma_u)
    for (a, b, c, d), r in quotient_histogram(H).entries.items():
        su = 0
        for x in xs:
            den = (c * x + d) % p
            if den == 0:
                continue  # u(x) = oo, never in A
            if (a * x + b) * inv(den) % p in members:
                su += 1
        pairs.append((r, su))
        total_rs += r * su
    rhs = len(A) * total_rs
    assert sig * sig <= rhs
    delta = Fraction(sig * sig, 3 * len(A) * len(H) ** 2)
    omega_size = 0
    omega_rs = 0
    for r, su in pairs:
        if su >= delta:
            omega_size += 1
            omega_rs += r * su
    share = Fraction(omega_rs, total_rs) if total_rs else Fraction(1)
    return CsChainReport(
        sigma=sig,
        lhs_sq=sig * sig,
        rhs_cs=rhs,
        delta=delta,
        omega_size=omega_size,
        omega_incidence_share=share,
    )

"""Construction and parsing of scalar sets A, B and translate sets H.

Set-spec grammar (one line, no whitespace significance):

    scalar := "ap:" int "," int "," count
            | "gp:" int "," int "," count
            | "random:" count ["," seed]
            | "list:" int ("," int)*
            | "invunion:" scalar
    hspec  := "cart:" scalar ";" scalar
            | "randomh:" count ["," seed]
            | "listh:" pair (";" pair)*        pair := int "," int

Integers are arbitrary-sign decimals reduced mod p.  Random specs draw
uniformly without replacement via random.Random(seed).sample, so a (p,
spec, seed) triple always names the same set.
"""

import random
from collections import Counter
from dataclasses import dataclass
from functools import cached_property

from .errors import EmptyInput, InvalidArgument, InvalidSpec, ModulusMismatch
from .field import Fp
from .moebius import Translate


@dataclass(frozen=True)
class ScalarSet:
    """Sorted, deduplicated residues mod p."""

    p: int
    elements: tuple[int, ...]

    def __post_init__(self):
        p = self.p
        object.__setattr__(self, "elements", tuple(sorted({e % p for e in self.elements})))

    @cached_property
    def members(self) -> frozenset:
        return frozenset(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.members

    def render(self) -> str:
        return "list:" + ",".join(str(e) for e in self.elements)


@dataclass(frozen=True)
class TranslateSet:
    """Deduplicated (a, b) pairs mod p, sorted lexicographically."""

    p: int
    elements: tuple[Translate, ...]

    def __post_init__(self):
        p = self.p
        object.__setattr__(
            self, "elements", tuple(sorted({(a % p, b % p) for a, b in self.elements}))
        )

    @cached_property
    def members(self) -> frozenset:
        return frozenset(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, h) -> bool:
        return h in self.members

    def render(self) -> str:
        return "listh:" + ";".join(f"{a},{b}" for a, b in self.elements)


_INT_CHARS = set("0123456789+-")


def _take_int(text: str, pos: int) -> tuple[int, int]:
    # Longest arbitrary-sign decimal starting at pos; InvalidSpec otherwise.
    j = pos
    if j < len(text) and text[j] in "+-":
        j += 1
    k = j
    while k < len(text) and text[k].isdigit():
        k += 1
    if k == j:
        raise InvalidSpec("expected an integer", position=pos)
    return int(text[pos:k]), k


def _take_count(text: str, pos: int) -> tuple[int, int]:
    n, k = _take_int(text, pos)
    if n < 1:
        raise InvalidSpec(f"element count must be >= 1, got {n}", position=pos)
    return n, k


def _expect(text: str, pos: int, ch: str) -> int:
    if pos >= len(text) or text[pos] != ch:
        raise InvalidSpec(f"expected {ch!r}", position=pos)
    return pos + 1


def _parse_scalar(text: str, pos: int, F: Fp, default_seed: int) -> tuple[ScalarSet, int]:
    p = F.p
    if text.startswith("ap:", pos) or text.startswith("gp:", pos):
        kind = text[pos : pos + 2]
        i = pos + 3
        start, i = _take_int(text, i)
        i = _expect(text, i, ",")
        step_pos = i
        step, i = _take_int(text, i)
        i = _expect(text, i, ",")
        n, i = _take_count(text, i)
        step %= p
        if step == 0:
            word = "step" if kind == "ap" else "ratio"
            raise InvalidSpec(f"{kind} {word} is 0 mod {p}", position=step_pos)
        if kind == "ap":
            elems = [(start + j * step) % p for j in range(n)]
        else:
            x = start % p
            elems = []
            for _ in range(n):
                elems.append(x)
                x = x * step % p
        return ScalarSet(p, tuple(elems)), i
    if text.startswith("random:", pos):
        i = pos + 7
        n, i = _take_count(text, i)
        seed = default_seed
        if i < len(text) and text[i] == ",":
            seed, i = _take_int(text, i + 1)
        if n > p:
            raise InvalidSpec(f"random count {n} exceeds field size {p}", position=pos)
        elems = random.Random(seed).sample(range(p), n)
        return ScalarSet(p, tuple(elems)), i
    if text.startswith("list:", pos):
        i = pos + 5
        elems = []
        v, i = _take_int(text, i)
        elems.append(v)
        while i < len(text) and text[i] == ",":
            v, i = _take_int(text, i + 1)
            elems.append(v)
        return ScalarSet(p, tuple(elems)), i
    if text.startswith("invunion:", pos):
        inner, i = _parse_scalar(text, pos + 9, F, default_seed)
        # 0 has no inverse and contributes only itself.
        elems = list(inner.elements) + [F.inv(e) for e in inner.elements if e != 0]
        return ScalarSet(p, tuple(elems)), i
    raise InvalidSpec("expected one of ap:/gp:/random:/list:/invunion:", position=pos)


def _parse_hspec(text: str, pos: int, F: Fp, default_seed: int) -> tuple[TranslateSet, int]:
    p = F.p
    if text.startswith("cart:", pos):
        first, i = _parse_scalar(text, pos + 5, F, default_seed)
        i = _expect(text, i, ";")
        second, i = _parse_scalar(text, i, F, default_seed)
        return gen_cartesian(first, second), i
    if text.startswith("randomh:", pos):
        i = pos + 8
        n, i = _take_count(text, i)
        seed = default_seed
        if i < len(text) and text[i] == ",":
            seed, i = _take_int(text, i + 1)
        if n > p * p:
            raise InvalidSpec(f"randomh count {n} exceeds p^2 = {p * p}", position=pos)
        flat = random.Random(seed).sample(range(p * p), n)
        return TranslateSet(p, tuple(divmod(v, p) for v in flat)), i
    if text.startswith("listh:", pos):
        i = pos + 6
        pairs = []
        a, i = _take_int(text, i)
        i = _expect(text, i, ",")
        b, i = _take_int(text, i)
        pairs.append((a, b))
        while i < len(text) and text[i] == ";":
            a, i = _take_int(text, i + 1)
            i = _expect(text, i, ",")
            b, i = _take_int(text, i)
            pairs.append((a, b))
        return TranslateSet(p, tuple(pairs)), i
    raise InvalidSpec("expected one of cart:/randomh:/listh:", position=pos)


def parse_setspec(text: str, F: Fp, default_seed: int = 0) -> ScalarSet | TranslateSet:
    """Materialize a scalar or translate set from its spec string."""
    s = text.strip()
    if s.startswith(("cart:", "randomh:", "listh:")):
        out, end = _parse_hspec(s, 0, F, default_seed)
    else:
        out, end = _parse_scalar(s, 0, F, default_seed)
    if end != len(s):
        raise InvalidSpec("trailing characters after set spec", position=end)
    return out


def read_scalar_file(path: str, F: Fp) -> ScalarSet:
    """One integer literal per line; blank lines ignored."""
    elems = []
    with open(path) as fh:
        for ln, line in enumerate(fh, start=1):
            s = line.strip()
            if not s:
                continue
            try:
                elems.append(int(s))
            except ValueError:
                raise InvalidSpec(f"{path}:{ln}: expected an integer, got {s!r}") from None
    if not elems:
        raise InvalidSpec(f"{path}: no elements")
    return ScalarSet(F.p, tuple(elems))


def read_translate_file(path: str, F: Fp) -> TranslateSet:
    """One 'a,b' pair per line; blank lines ignored."""
    pairs = []
    with open(path) as fh:
        for ln, line in enumerate(fh, start=1):
            s = line.strip()
            if not s:
                continue
            parts = s.split(",")
            try:
                if len(parts) != 2:
                    raise ValueError
                pairs.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise InvalidSpec(f"{path}:{ln}: expected 'a,b', got {s!r}") from None
    if not pairs:
        raise InvalidSpec(f"{path}: no pairs")
    return TranslateSet(F.p, tuple(pairs))


def gen_cartesian(B: ScalarSet, C: ScalarSet) -> TranslateSet:
    """All |B|*|C| translates (a, b) with a in B, b in C."""
    if B.p != C.p:
        raise ModulusMismatch(f"cartesian product across moduli {B.p} and {C.p}")
    return TranslateSet(B.p, tuple((a, b) for a in B for b in C))


def max_line_multiplicity(H: TranslateSet) -> int:
    """M = the largest number of translates sharing an abscissa or ordinate."""
    if len(H) == 0:
        raise EmptyInput("max_line_multiplicity of an empty translate set")
    rows = Counter(a for a, _ in H)
    cols = Counter(b for _, b in H)
    return max(max(rows.values()), max(cols.values()))


def prune_rich_lines(H: TranslateSet, threshold: int) -> tuple[TranslateSet, TranslateSet]:
    """Split H into (kept, removed) around vertical/horizontal line richness.

    removed collects every translate on a line carrying >= threshold
    translates of H.  One simultaneous pass suffices: a line of kept is a
    subset of the same line of H, so kept's multiplicities stay below the
    threshold without iteration.
    """
    if threshold < 1:
        raise InvalidArgument(f"threshold must be >= 1, got {threshold}")
    rows = Counter(a for a, _ in H)
    cols = Counter(b for _, b in H)
    kept, removed = [], []
    for a, b in H:
        if rows[a] >= threshold or cols[b] >= threshold:
            removed.append((a, b))
        else:
            kept.append((a, b))
    return TranslateSet(H.p, tuple(kept)), TranslateSet(H.p, tuple(removed))


def rotate_coordinates(H: TranslateSet) -> TranslateSet:
    """Bijection (a, b) -> ((a+b)/2, (a-b)/2); p odd makes 2 invertible."""
    p = H.p
    half = (p + 1) // 2  # inverse of 2 mod p
    return TranslateSet(
        p, tuple(((a + b) * half % p, (a - b) * half % p) for a, b in H)
    )


def unrotate_coordinates(H: TranslateSet) -> TranslateSet:
    """Inverse of rotate_coordinates: (u, v) -> (u+v, u-v)."""
    p = H.p
    return TranslateSet(p, tuple(((u + v) % p, (u - v) % p) for u, v in H))


def sumset(A: ScalarSet, B: ScalarSet) -> ScalarSet:
    if A.p != B.p:
        raise ModulusMismatch(f"sumset across moduli {A.p} and {B.p}")
    return ScalarSet(A.p, tuple((a + b) % A.p for a in A for b in B))


def difference_set(A: ScalarSet, B: ScalarSet) -> ScalarSet:
    if A.p != B.p:
        raise ModulusMismatch(f"difference set across moduli {A.p} and {B.p}")
    return ScalarSet(A.p, tuple((a - b) % A.p for a in A for b in B))

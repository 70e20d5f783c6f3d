"""6x6 skew-symmetric polynomial matrices and their 4x4 Pfaffians."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .groebner import Ideal, ideal_member
from .polyring import Polynomial, WeightedRing, parse

PAIRS = tuple(combinations(range(1, 7), 2))
SUBSETS = tuple(combinations(range(1, 7), 4))


class ProfileError(ValueError):
    def __init__(self, i: int, j: int, entry: Polynomial, expected: Fraction):
        self.i, self.j, self.entry, self.expected = i, j, entry, expected
        super().__init__(f"m{i}{j} = {entry} is not homogeneous of degree {expected}")


class SkewMatrix6:
    """Skew-symmetric 6x6 matrix given by its entries above the diagonal.

    ``profile`` holds doubled row degrees ``(2*r_1, ..., 2*r_6)``; with a
    profile, each nonzero ``m_ij`` must be homogeneous of degree ``r_i + r_j``.
    Indices are 1-based, as in the usual matrix notation.
    """

    def __init__(self, ring: WeightedRing, entries: Mapping[tuple[int, int], Polynomial],
                 profile: Sequence[int] | None = None):
        self.ring = ring
        full = {}
        for (i, j) in PAIRS:
            e = entries.get((i, j), ring.zero())
            if isinstance(e, (int, Fraction)):
                e = ring.const(e)
            if e.ring != ring:
                raise ValueError(f"m{i}{j} is not in {ring}")
            full[(i, j)] = e
        extra = set(entries) - set(PAIRS)
        if extra:
            raise ValueError(f"only entries above the diagonal may be given, got {sorted(extra)}")
        self._m = full
        self.profile = tuple(profile) if profile is not None else None
        if self.profile is not None and len(self.profile) != 6:
            raise ValueError("profile needs six doubled row degrees")

    def __getitem__(self, ij: tuple[int, int]) -> Polynomial:
        i, j = ij
        if i == j:
            return self.ring.zero()
        if i < j:
            return self._m[(i, j)]
        return -self._m[(j, i)]

    def entries(self) -> dict[tuple[int, int], Polynomial]:
        return dict(self._m)

    def rows(self) -> list[list[Polynomial]]:
        return [[self[i, j] for j in range(1, 7)] for i in range(1, 7)]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Polynomial]], profile=None) -> "SkewMatrix6":
        """Build from a full 6x6 array, checking skew-symmetry."""
        ring = rows[0][1].ring
        for i in range(6):
            if rows[i][i]:
                raise ValueError("diagonal entries must vanish")
            for j in range(i + 1, 6):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) are not opposite")
        return cls(ring, {(i, j): rows[i - 1][j - 1] for i, j in PAIRS}, profile)

    def __eq__(self, other):
        return isinstance(other, SkewMatrix6) and self._m == other._m

    def __repr__(self):
        body = ", ".join(f"m{i}{j}={e}" for (i, j), e in self._m.items() if e)
        return f"SkewMatrix6({body})"

    def check_profile(self):
        """Raise :class:`ProfileError` on the first entry of the wrong degree."""
        if self.profile is None:
            return
        r = self.profile
        for (i, j), e in self._m.items():
            if not e:
                continue
            want = r[i - 1] + r[j - 1]
            deg = e.weighted_degree()
            if deg is None or 2 * deg != want:
                raise ProfileError(i, j, e, Fraction(want, 2))

    def with_profile(self, profile) -> "SkewMatrix6":
        return SkewMatrix6(self.ring, self._m, profile)


def solve_profile(M: SkewMatrix6) -> tuple[int, ...] | None:
    """Doubled row degrees ``2r`` with ``r_i + r_j = deg m_ij`` for every
    nonzero homogeneous entry, or ``None`` if no consistent profile exists or
    the nonzero entries do not pin it down."""
    eqs = []
    for (i, j), e in M.entries().items():
        if e:
            d = e.weighted_degree()
            if d is None:
                return None
            eqs.append((i - 1, j - 1, Fraction(d)))
    r: list[Fraction | None] = [None] * 6
    # three entries forming a triangle fix one row degree; propagate from it
    for a, b, c in combinations(range(6), 3):
        known = {(x, y): d for x, y, d in eqs}
        try:
            dab, dac, dbc = known[(a, b)], known[(a, c)], known[(b, c)]
        except KeyError:
            continue
        r[a] = (dab + dac - dbc) / 2
        break
    else:
        return None
    changed = True
    while changed:
        changed = False
        for x, y, d in eqs:
            if r[x] is not None and r[y] is None:
                r[y], changed = d - r[x], True
            elif r[y] is not None and r[x] is None:
                r[x], changed = d - r[y], True
    if any(v is None for v in r):
        return None
    if any(r[x] + r[y] != d for x, y, d in eqs):
        return None
    return tuple(int(2 * v) for v in r)


def pfaffian4(M: SkewMatrix6, subset: Sequence[int]) -> Polynomial:
    """Pf = m_ij*m_kl - m_ik*m_jl + m_il*m_jk for i < j < k < l."""
    i, j, k, l = subset
    if not (1 <= i < j < k < l <= 6):
        raise ValueError(f"need 1 <= i < j < k < l <= 6, got {tuple(subset)}")
    return M[i, j] * M[k, l] - M[i, k] * M[j, l] + M[i, l] * M[j, k]


@dataclass(frozen=True)
class PfaffianSet:
    """The fifteen 4x4 Pfaffians, keyed by 1-based index 4-tuples."""

    ring: WeightedRing
    values: Mapping[tuple[int, int, int, int], Polynomial]

    def __getitem__(self, subset) -> Polynomial:
        return self.values[tuple(subset)]

    def __iter__(self):
        return iter(SUBSETS)

    def items(self):
        return [(s, self.values[s]) for s in SUBSETS]

    def nonzero(self) -> list[Polynomial]:
        return [self.values[s] for s in SUBSETS if self.values[s]]

    def ideal(self) -> Ideal:
        return Ideal(self.ring, self.nonzero())


def all_pfaffians(M: SkewMatrix6) -> PfaffianSet:
    M.check_profile()
    return PfaffianSet(M.ring, {s: pfaffian4(M, s) for s in SUBSETS})


def pfaffian_ideal(M: SkewMatrix6) -> Ideal:
    return all_pfaffians(M).ideal()


@dataclass(frozen=True)
class ExtrasymmetricSpec:
    """Entries a..i and multipliers p, q of an extrasymmetric matrix."""

    a: Polynomial
    b: Polynomial
    c: Polynomial
    d: Polynomial
    e: Polynomial
    f: Polynomial
    g: Polynomial
    h: Polynomial
    i: Polynomial
    p: Polynomial
    q: Polynomial

    @classmethod
    def generic(cls, ring: WeightedRing) -> "ExtrasymmetricSpec":
        """Each slot is the ring variable of the same name."""
        return cls(*(ring.var(n) for n in "abcdefghipq"))


# weights making the generic extrasymmetric Pfaffians homogeneous:
# row degrees (1, 1, 2, 2, 2, 2) give deg p = deg q = 1
GENERIC_EXTRASYM_WEIGHTS = dict(a=2, b=3, c=3, d=3, e=3, f=3, g=3, h=3, i=4, p=1, q=1)
GENERIC_EXTRASYM_PROFILE = (2, 2, 4, 4, 4, 4)


def generic_extrasym_ring(field) -> WeightedRing:
    names = list("abcdefghipq")
    return WeightedRing(names, [GENERIC_EXTRASYM_WEIGHTS[n] for n in names], field)


def build_extrasymmetric(spec: ExtrasymmetricSpec, profile=None) -> SkewMatrix6:
    """The matrix with rows (0 a b c d e / 0 f g h d / 0 i pg pc / 0 qf qb / 0 pqa / 0)."""
    s = spec
    ring = s.a.ring
    entries = {
        (1, 2): s.a, (1, 3): s.b, (1, 4): s.c, (1, 5): s.d, (1, 6): s.e,
        (2, 3): s.f, (2, 4): s.g, (2, 5): s.h, (2, 6): s.d,
        (3, 4): s.i, (3, 5): s.p * s.g, (3, 6): s.p * s.c,
        (4, 5): s.q * s.f, (4, 6): s.q * s.b,
        (5, 6): s.p * s.q * s.a,
    }
    return SkewMatrix6(ring, entries, profile)


def segre_double(A: Sequence[Sequence[Polynomial]], twisted: bool = False) -> SkewMatrix6:
    """Skew 6x6 doubling of a 3x3 matrix A = B + C, B = (A - A^T)/2, C = (A + A^T)/2.

    The default layout is D = (B C; -C -B), whose fifteen 4x4 Pfaffians
    generate exactly the ideal of the 2x2 minors of A.  ``twisted=True``
    gives D = (B C; -C B); its Pfaffians generate the minors of B + iC
    instead (the same variety only after C -> iC, so not over QQ or GF(p)
    with p = 3 mod 4).
    """
    ring = A[0][0].ring
    if ring.field.characteristic == 2:
        raise ValueError("the symmetric/antisymmetric split needs characteristic != 2")
    half = ring.field.inv(ring.field(2))
    B = [[(A[r][c] - A[c][r]) * half for c in range(3)] for r in range(3)]
    C = [[(A[r][c] + A[c][r]) * half for c in range(3)] for r in range(3)]
    entries = {}
    for i, j in PAIRS:
        r, c = (i - 1) % 3, (j - 1) % 3
        if j <= 3:
            entries[(i, j)] = B[r][c]
        elif i <= 3:
            entries[(i, j)] = C[r][c]
        else:
            entries[(i, j)] = B[r][c] if twisted else -B[r][c]
    return SkewMatrix6(ring, entries)


def split_blocks(D: SkewMatrix6) -> tuple[list[list[Polynomial]], list[list[Polynomial]]]:
    """Recover (B, C) from D = (B C; -C -B) or (B C; -C B)."""
    B = [[D[r + 1, c + 1] for c in range(3)] for r in range(3)]
    C = [[D[r + 1, c + 4] for c in range(3)] for r in range(3)]
    lower = [[D[r + 4, c + 4] for c in range(3)] for r in range(3)]
    for r in range(3):
        for c in range(3):
            if D[r + 4, c + 1] != -C[r][c]:
                raise ValueError("lower-left block is not -C")
    signs = [s for s in (1, -1) if all(lower[r][c] == B[r][c] * s for r in range(3) for c in range(3))]
    if not signs:
        raise ValueError("lower-right block is not +-B")
    for r in range(3):
        for c in range(3):
            if B[r][c] != -B[c][r] or C[r][c] != C[c][r]:
                raise ValueError("blocks are not antisymmetric/symmetric")
    return B, C


def two_by_two_minors(A: Sequence[Sequence[Polynomial]]) -> list[Polynomial]:
    """All 2x2 minors of a matrix given as a list of rows."""
    nr, nc = len(A), len(A[0])
    out = []
    for r1, r2 in combinations(range(nr), 2):
        for c1, c2 in combinations(range(nc), 2):
            out.append(A[r1][c1] * A[r2][c2] - A[r1][c2] * A[r2][c1])
    return out


@dataclass
class NineReport:
    chosen: list[tuple[int, int, int, int]]
    residuals: list[tuple[int, int, int, int]]
    residual_membership: list[bool] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.residual_membership)


def reduce_to_nine(M: SkewMatrix6) -> NineReport:
    """Greedy minimal generating subset of the Pfaffian ideal.

    Pfaffians are visited by increasing degree (index order breaks ties); one
    is kept iff it is nonzero and not in the ideal of those kept so far.  The
    leftovers are then re-tested against the ideal of the full chosen set.
    """
    pf = all_pfaffians(M)

    def sort_key(s):
        f = pf[s]
        return ((f.max_degree() if f else -1), s)

    chosen: list[tuple[int, int, int, int]] = []
    for s in sorted(SUBSETS, key=sort_key):
        f = pf[s]
        if not f:
            continue
        if chosen and ideal_member(Ideal(M.ring, [pf[c] for c in chosen]), f):
            continue
        chosen.append(s)
    rest = [s for s in SUBSETS if s not in chosen]
    I = Ideal(M.ring, [pf[c] for c in chosen])
    return NineReport(chosen, rest, [ideal_member(I, pf[s]) for s in rest])


_ENTRY = re.compile(r"\s*m([1-6])([1-6])\s*=\s*(.+?)\s*$")


def parse_matrix(text: str, bindings: Mapping[str, Polynomial] | None = None) -> SkewMatrix6:
    """Parse a ring declaration followed by ``m<i><j> = <polynomial>`` lines.

    Blank lines and ``#`` comments are ignored; missing entries are zero.
    """
    ring = None
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ring is None:
            ring = WeightedRing.parse(line)
            continue
        m = _ENTRY.fullmatch(line)
        if not m:
            raise ValueError(f"line {lineno}: expected 'm<i><j> = <polynomial>', got {raw!r}")
        i, j = int(m.group(1)), int(m.group(2))
        if not i < j:
            raise ValueError(f"line {lineno}: need i < j in m{i}{j}")
        if (i, j) in entries:
            raise ValueError(f"line {lineno}: duplicate entry m{i}{j}")
        entries[(i, j)] = parse(m.group(3), ring, bindings)
    if ring is None:
        raise ValueError("missing ring declaration")
    return SkewMatrix6(ring, entries)


def format_matrix(M: SkewMatrix6) -> str:
    lines = [M.ring.declaration()]
    lines += [f"m{i}{j} = {M[i, j]}" for i, j in PAIRS]
    return "\n".join(lines) + "\n"

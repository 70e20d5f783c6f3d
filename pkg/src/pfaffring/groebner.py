"""Buchberger-based ideal computations over weighted polynomial rings.

Internally monomials are packed into a single Python int per monomial order.
The packing stores, block by block, the partial weighted sums
``sum(w_i * e_i for the first k variables of the block)`` for decreasing k,
each in a fixed-width bit field.  Integer comparison of packed keys then
coincides with the monomial order, and monomial multiplication is integer
addition.  A second packing of the raw exponents (with guard bits) gives
branch-free divisibility tests.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from .linalg import rank
from .polyring import Polynomial, WeightedRing, monomials_of_degree

_FIELD_BITS = 32
_FIELD_MASK = (1 << _FIELD_BITS) - 1
_EXP_BITS = 16
_EXP_LIMIT = 1 << (_EXP_BITS - 1)


class InhomogeneousError(ValueError):
    def __init__(self, generator: Polynomial):
        self.generator = generator
        super().__init__(f"generator is not weighted-homogeneous: {generator}")


class GroebnerTimeout(RuntimeError):
    """Raised when a Buchberger run exceeds its time budget."""


class MonomialOrder:
    """Weighted degree-reverse-lexicographic order on blocks of variables.

    ``blocks`` is a list of variable-index sequences covering the ring.  Two
    monomials are compared on the first block (weighted degree, then
    reverse-lex inside the block), then on the second, and so on.  One block
    gives weighted degrevlex; two blocks give an elimination order for the
    first block.
    """

    def __init__(self, ring: WeightedRing, blocks: Sequence[Sequence[int]], kind: str):
        flat = sorted(i for b in blocks for i in b)
        if flat != list(range(ring.nvars)):
            raise ValueError("blocks must partition the ring variables")
        self.ring = ring
        self.blocks = tuple(tuple(b) for b in blocks if b)
        self.kind = kind
        self._ctx = None

    @classmethod
    def degrevlex(cls, ring: WeightedRing, variable_order: Sequence[str] | None = None):
        """Weighted degrevlex; ``variable_order`` permutes the tie-breaking sequence."""
        names = ring.variables if variable_order is None else tuple(variable_order)
        if sorted(names) != sorted(ring.variables):
            raise ValueError("variable_order must be a permutation of the ring variables")
        return cls(ring, [[ring.index(v) for v in names]], "weighted-degrevlex")

    @classmethod
    def elimination(cls, ring: WeightedRing, front: Iterable[str]):
        """Block order eliminating ``front``: any monomial involving the front block
        is larger than every monomial in the remaining variables."""
        front = set(front)
        unknown = front - set(ring.variables)
        if unknown:
            raise KeyError(f"unknown variables {sorted(unknown)}")
        fb = [i for i, v in enumerate(ring.variables) if v in front]
        bb = [i for i, v in enumerate(ring.variables) if v not in front]
        return cls(ring, [fb, bb], "block-elimination")

    @property
    def front(self) -> tuple[str, ...]:
        if self.kind != "block-elimination":
            return ()
        return tuple(self.ring.variables[i] for i in self.blocks[0])

    def key(self, exps: Sequence[int]) -> int:
        """Sort key: larger key means larger monomial."""
        return self.context().encode(tuple(exps))

    def leading_monomial(self, f: Polynomial) -> tuple[int, ...]:
        if not f:
            raise ValueError("zero polynomial has no leading monomial")
        return max((m for m, _ in f.items()), key=self.key)

    def context(self) -> "_Context":
        if self._ctx is None:
            self._ctx = _Context(self)
        return self._ctx

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.ring, self.blocks) == (other.ring, other.blocks)

    def __hash__(self):
        return hash((self.ring, self.blocks))

    def __repr__(self):
        names = [[self.ring.variables[i] for i in b] for b in self.blocks]
        return f"MonomialOrder({self.kind}, {names})"


class _Context:
    """Encoding tables for one monomial order."""

    def __init__(self, order: MonomialOrder):
        ring = order.ring
        self.ring = ring
        self.field = ring.field
        self.p = ring.field.modulus
        self.n = ring.nvars
        self.weights = ring.weights
        self.blocks = order.blocks
        self.nrows = self.n
        self.guard = sum(1 << (_EXP_BITS * i + _EXP_BITS - 1) for i in range(self.n))
        self._decode: dict[int, tuple[tuple[int, ...], int]] = {}

    def encode(self, exps: tuple[int, ...]) -> int:
        w = self.weights
        key = 0
        for blk in self.blocks:
            s = 0
            for i in blk:
                s += w[i] * exps[i]
            for i in reversed(blk):
                if s > _FIELD_MASK:
                    raise OverflowError("monomial degree too large for packed order key")
                key = (key << _FIELD_BITS) | s
                s -= w[i] * exps[i]
        if key not in self._decode:
            if any(e >= _EXP_LIMIT for e in exps):
                raise OverflowError("exponent too large")
            packed = 0
            for i, e in enumerate(exps):
                packed |= e << (_EXP_BITS * i)
            self._decode[key] = (exps, packed)
        return key

    def decode(self, key: int) -> tuple[tuple[int, ...], int]:
        hit = self._decode.get(key)
        if hit is not None:
            return hit
        rows = []
        k = key
        for _ in range(self.nrows):
            rows.append(k & _FIELD_MASK)
            k >>= _FIELD_BITS
        rows.reverse()
        exps = [0] * self.n
        pos = 0
        w = self.weights
        for blk in self.blocks:
            r = rows[pos:pos + len(blk)] + [0]
            for j, i in enumerate(reversed(blk)):
                exps[i] = (r[j] - r[j + 1]) // w[i]
            pos += len(blk)
        exps = tuple(exps)
        packed = 0
        for i, e in enumerate(exps):
            packed |= e << (_EXP_BITS * i)
        self._decode[key] = (exps, packed)
        return exps, packed

    def degree(self, key: int) -> int:
        exps, _ = self.decode(key)
        return sum(e * w for e, w in zip(exps, self.weights))

    def lcm(self, a: int, b: int) -> int:
        ea, _ = self.decode(a)
        eb, _ = self.decode(b)
        return self.encode(tuple(x if x > y else y for x, y in zip(ea, eb)))

    def divides(self, a: int, b: int) -> bool:
        """Does monomial ``a`` divide monomial ``b``?"""
        pa = self.decode(a)[1]
        pb = self.decode(b)[1]
        g = self.guard
        return ((pb | g) - pa) & g == g

    def from_poly(self, f: Polynomial) -> dict[int, object]:
        return {self.encode(m): c for m, c in f.items()}

    def to_poly(self, f: dict[int, object]) -> Polynomial:
        return Polynomial(self.ring, {self.decode(k)[0]: c for k, c in f.items()}, _normalized=True)

    def monic(self, f: dict[int, object]) -> dict[int, object]:
        lm = max(f)
        lc = f[lm]
        if lc == 1:
            return f
        inv = self.field.inv(lc)
        if self.p is None:
            return {k: c * inv for k, c in f.items()}
        p = self.p
        return {k: c * inv % p for k, c in f.items()}


class _Reducers:
    """Monic polynomials used as reducers, with a cached divisor lookup."""

    def __init__(self, ctx: _Context):
        self.ctx = ctx
        self.lms: list[int] = []
        self.packed: list[int] = []
        self.tails: list[list[tuple[int, object]]] = []
        self._hit: dict[int, int] = {}

    def add(self, f: dict[int, object]) -> int:
        lm = max(f)
        assert f[lm] == 1
        # tails store negated coefficients so reduction is a fused multiply-add
        tail = sorted(((k, -c) for k, c in f.items() if k != lm), reverse=True)
        self.lms.append(lm)
        self.packed.append(self.ctx.decode(lm)[1])
        self.tails.append(tail)
        return len(self.lms) - 1

    def find(self, key: int) -> int | None:
        hit = self._hit.get(key)
        n = len(self.lms)
        if hit is not None:
            if hit >= 0:
                return hit
            start = -hit - 1
            if start == n:
                return None
        else:
            start = 0
        pm = self.ctx.decode(key)[1] | self.ctx.guard
        g = self.ctx.guard
        packed = self.packed
        for j in range(start, n):
            if (pm - packed[j]) & g == g:
                self._hit[key] = j
                return j
        self._hit[key] = -n - 1
        return None

    def reduce(self, f: dict[int, object], full: bool = True) -> dict[int, object]:
        """Remainder of ``f`` (dict form) on division by the reducers."""
        if not f:
            return {}
        p = self.ctx.p
        f = dict(f)
        heap = [-k for k in f]
        heapq.heapify(heap)
        rem = {}
        find = self.find
        lms = self.lms
        tails = self.tails
        push = heapq.heappush
        pop = heapq.heappop
        while heap:
            k = -pop(heap)
            c = f.pop(k, None)
            if c is None:
                continue
            j = find(k)
            if j is None:
                rem[k] = c
                if not full:
                    rem.update(f)
                    return rem
                continue
            shift = k - lms[j]
            if p is None:
                for tk, tc in tails[j]:
                    nk = tk + shift
                    old = f.get(nk)
                    if old is None:
                        f[nk] = c * tc
                        push(heap, -nk)
                    else:
                        v = old + c * tc
                        if v:
                            f[nk] = v
                        else:
                            del f[nk]
            else:
                for tk, tc in tails[j]:
                    nk = tk + shift
                    old = f.get(nk)
                    if old is None:
                        f[nk] = c * tc % p
                        push(heap, -nk)
                    else:
                        v = (old + c * tc) % p
                        if v:
                            f[nk] = v
                        else:
                            del f[nk]
        return rem


def _spoly(ctx: _Context, f: dict, g: dict, lf: int, lg: int) -> dict:
    lcm = ctx.lcm(lf, lg)
    sf, sg = lcm - lf, lcm - lg
    p = ctx.p
    out: dict = {}
    for k, c in f.items():
        if k != lf:
            out[k + sf] = c
    for k, c in g.items():
        if k != lg:
            nk = k + sg
            v = out.get(nk, 0) - c
            if p is not None:
                v %= p
            if v:
                out[nk] = v
            else:
                out.pop(nk, None)
    return out


@dataclass
class BuchbergerStats:
    pairs_considered: int = 0
    pairs_reduced: int = 0
    zero_reductions: int = 0
    millis: int = 0


def _buchberger(ctx: _Context, gens: list[dict], degree_bound: int | None,
                timeout: float | None, stats: BuchbergerStats):
    start = time.monotonic()
    G: list[dict] = []
    lms: list[int] = []
    reducers = _Reducers(ctx)
    pairs: set[tuple[int, int]] = set()
    queue: list = []
    seq = 0
    truncated = False

    for f in gens:
        lm = max(f)
        deg = ctx.degree(lm)
        queue.append((deg, lm, seq, -1, f))
        seq += 1
    heapq.heapify(queue)

    def add(f: dict):
        nonlocal seq
        f = ctx.monic(f)
        lm = max(f)
        n = len(G)
        # Gebauer-Moeller: drop old pairs made redundant by the new element
        stale = set()
        for (i, j) in pairs:
            lij = ctx.lcm(lms[i], lms[j])
            if (ctx.divides(lm, lij) and ctx.lcm(lms[i], lm) != lij
                    and ctx.lcm(lms[j], lm) != lij):
                stale.add((i, j))
        pairs.difference_update(stale)
        by_lcm: dict[int, list[int]] = {}
        for i in range(n):
            by_lcm.setdefault(ctx.lcm(lms[i], lm), []).append(i)
        minimal: list[int] = []
        for L in sorted(by_lcm):
            if all(not ctx.divides(M, L) for M in minimal):
                minimal.append(L)
        G.append(f)
        lms.append(lm)
        reducers.add(f)
        for L in minimal:
            group = by_lcm[L]
            # coprime leading monomials: the whole lcm class is superfluous
            if any(L == lms[i] + lm for i in group):
                continue
            i = min(group)
            pairs.add((i, n))
            heapq.heappush(queue, (ctx.degree(L), L, seq, i, n))
            seq += 1

    while queue:
        if timeout is not None and time.monotonic() - start > timeout:
            raise GroebnerTimeout(f"Groebner basis exceeded {timeout:.1f}s "
                                  f"({len(G)} elements, {len(pairs)} pairs pending)")
        deg, L, _, i, payload = heapq.heappop(queue)
        if degree_bound is not None and deg > degree_bound:
            truncated = True
            break
        if i == -1:
            h = reducers.reduce(payload)
        else:
            j = payload
            if (i, j) not in pairs:
                continue
            pairs.discard((i, j))
            stats.pairs_considered += 1
            h = reducers.reduce(_spoly(ctx, G[i], G[j], lms[i], lms[j]))
            stats.pairs_reduced += 1
        if h:
            add(h)
        elif i != -1:
            stats.zero_reductions += 1

    # minimal basis, then inter-reduce tails
    keep = [g for k, g in enumerate(G)
            if not any(k2 != k and ctx.divides(lms[k2], lms[k]) for k2 in range(len(G)))]
    final = _Reducers(ctx)
    for g in keep:
        final.add(g)
    reduced = []
    for g in keep:
        lm = max(g)
        tail = {k: c for k, c in g.items() if k != lm}
        r = final.reduce(tail)
        r[lm] = 1
        reduced.append(r)
    reduced.sort(key=max, reverse=True)
    stats.millis = int((time.monotonic() - start) * 1000)
    return reduced, truncated


class Ideal:
    """Ideal given by generators; zero generators are discarded."""

    def __init__(self, ring: WeightedRing, generators: Iterable[Polynomial]):
        gens = []
        for g in generators:
            if g.ring != ring:
                raise ValueError(f"generator {g} is not in {ring}")
            if g:
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)
        self._bases: dict = {}

    def __repr__(self):
        return f"Ideal({len(self.generators)} generators in {self.ring.declaration()!r})"

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def check_homogeneous(self):
        for g in self.generators:
            if not g.is_homogeneous():
                raise InhomogeneousError(g)

    def groebner(self, order: MonomialOrder | None = None, degree_bound: int | None = None,
                 timeout: float | None = None) -> "GroebnerBasis":
        order = order or MonomialOrder.degrevlex(self.ring)
        for (o, bound), gb in self._bases.items():
            if o == order and (bound is None or (degree_bound is not None and degree_bound <= bound)):
                return gb
        gb = groebner_basis(self, order, degree_bound=degree_bound, timeout=timeout)
        self._bases[(order, None if gb.complete else degree_bound)] = gb
        return gb


class GroebnerBasis:
    """Reduced, monic Groebner basis.  ``degree_bound`` is set when the run
    was truncated; the basis is then only valid in degrees up to the bound."""

    def __init__(self, order: MonomialOrder, elements: list[dict], degree_bound: int | None,
                 stats: BuchbergerStats | None = None):
        self.order = order
        self.ring = order.ring
        ctx = order.context()
        self._ctx = ctx
        self._kernel = elements
        self._reducers = _Reducers(ctx)
        for g in elements:
            self._reducers.add(g)
        self.elements = tuple(ctx.to_poly(g) for g in elements)
        self.degree_bound = degree_bound
        self.stats = stats or BuchbergerStats()

    @property
    def complete(self) -> bool:
        return self.degree_bound is None

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def leading_monomials(self) -> list[tuple[int, ...]]:
        return [self._ctx.decode(max(g))[0] for g in self._kernel]

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise ValueError("polynomial and basis live in different rings")
        return self._ctx.to_poly(self._reducers.reduce(self._ctx.from_poly(f)))

    def is_unit_ideal(self) -> bool:
        return any(all(e == 0 for e in m) for m in self.leading_monomials())

    def s_pairs_reduce_to_zero(self) -> bool:
        """Buchberger's criterion checked exhaustively over all pairs."""
        ctx = self._ctx
        G = self._kernel
        for i in range(len(G)):
            for j in range(i + 1, len(G)):
                s = _spoly(ctx, G[i], G[j], max(G[i]), max(G[j]))
                if self._reducers.reduce(s):
                    return False
        return True


def groebner_basis(I: Ideal, order: MonomialOrder | None = None, degree_bound: int | None = None,
                   timeout: float | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of ``I`` by Buchberger's algorithm.

    Pairs are processed by weighted degree of their lcm, then by the order of
    the lcm; Buchberger's coprime and chain criteria prune pairs
    (Gebauer-Moeller form).  With ``degree_bound`` (homogeneous ideals only)
    pairs of larger degree are skipped and the result is exact through that
    degree.
    """
    order = order or MonomialOrder.degrevlex(I.ring)
    if order.ring != I.ring:
        raise ValueError("order and ideal live in different rings")
    if degree_bound is not None:
        I.check_homogeneous()
    ctx = order.context()
    gens = [ctx.monic(ctx.from_poly(g)) for g in I.generators]
    stats = BuchbergerStats()
    elements, truncated = _buchberger(ctx, gens, degree_bound, timeout, stats)
    return GroebnerBasis(order, elements, degree_bound if truncated else None, stats)


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    return G.normal_form(f)


def _membership_basis(I: Ideal, degree: int | None) -> GroebnerBasis:
    if degree is not None and I.is_homogeneous():
        return I.groebner(degree_bound=degree)
    return I.groebner()


def ideal_member(I: Ideal, f: Polynomial) -> bool:
    """``f in I`` by normal form; homogeneous input only needs a basis truncated at deg f."""
    if f.ring != I.ring:
        raise ValueError("polynomial and ideal live in different rings")
    if not f:
        return True
    deg = f.weighted_degree()
    return not _membership_basis(I, deg).normal_form(f)


def ideal_contains(I: Ideal, J: Ideal) -> bool:
    """Is every generator of ``J`` in ``I``?"""
    if not J.generators:
        return True
    degs = [g.weighted_degree() for g in J.generators]
    bound = None if None in degs else max(degs)
    G = _membership_basis(I, bound)
    return all(not G.normal_form(g) for g in J.generators)


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    if I.ring != J.ring:
        raise ValueError("ideals live in different rings")
    return ideal_contains(I, J) and ideal_contains(J, I)


def eliminate_vars(I: Ideal, front: Iterable[str], timeout: float | None = None) -> Ideal:
    """Generators of ``I`` intersected with the subring omitting ``front``,
    expressed in that smaller ring."""
    front = tuple(front)
    order = MonomialOrder.elimination(I.ring, front)
    G = I.groebner(order, timeout=timeout)
    small = I.ring.drop(front)
    drop = set(front)
    keep = [g for g in G.elements if not (g.variables_used() & drop)]
    return Ideal(small, [g.to_ring(small) for g in keep])


@dataclass(frozen=True)
class HilbertTable:
    """Dimensions of the graded pieces in degrees ``0..len(values)-1``."""

    values: tuple[int, ...]

    def __getitem__(self, d):
        return self.values[d]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def as_list(self) -> list[int]:
        return list(self.values)


def count_standard_monomials(weights: tuple[int, ...], leading: Sequence[tuple[int, ...]],
                             D: int) -> HilbertTable:
    out = []
    for d in range(D + 1):
        n = 0
        for m in monomials_of_degree(weights, d):
            if not any(all(a >= b for a, b in zip(m, lm)) for lm in leading):
                n += 1
        out.append(n)
    return HilbertTable(tuple(out))


def hilbert_function(I: Ideal, D: int = 14, order: MonomialOrder | None = None) -> HilbertTable:
    """Dimensions of the degree-d pieces of R/I for d = 0..D, counted as
    standard monomials of a Groebner basis truncated at degree D."""
    I.check_homogeneous()
    G = I.groebner(order, degree_bound=D)
    return count_standard_monomials(I.ring.weights, G.leading_monomials(), D)


def dim_by_linear_algebra(I: Ideal, d: int) -> int:
    """dim (R/I)_d as (#monomials of degree d) minus the rank of the span of
    all products m*g in degree d.  Uses no Groebner bases."""
    I.check_homogeneous()
    ring = I.ring
    cols = monomials_of_degree(ring.weights, d)
    index = {m: k for k, m in enumerate(cols)}
    rows = []
    for g in I.generators:
        e = g.weighted_degree()
        if e > d:
            continue
        for m in monomials_of_degree(ring.weights, d - e):
            rows.append({index[tuple(a + b for a, b in zip(m, gm))]: c for gm, c in g.items()})
    return len(cols) - rank(rows, len(cols), ring.field)

"""Sparse multivariate polynomials over weighted rings.

Polynomials are immutable mappings from exponent tuples to nonzero
coefficients.  Coefficients live either in the rationals (``fractions.Fraction``)
or in a prime field GF(p) (plain ints reduced into ``[0, p)``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import gmpy2

DEFAULT_PRIME = 32003


class RingMismatchError(ValueError):
    """Raised when combining polynomials that live in different rings."""


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class ClearingError(ValueError):
    """Raised when a denominator-clearing substitution leaves a negative exponent."""

    def __init__(self, message: str, monomial: str, exponent: int):
        self.monomial = monomial
        self.exponent = exponent
        super().__init__(message)


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: exact rationals (``modulus is None``) or GF(modulus)."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None:
            p = self.modulus
            if not isinstance(p, int) or p <= 2 or not gmpy2.is_prime(p):
                raise ValueError(f"modulus must be an odd prime, got {p!r}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def prime(cls, p: int = DEFAULT_PRIME) -> "FieldSpec":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``QQ`` or ``GF(p)``."""
        s = text.strip()
        if s in ("QQ", "Q"):
            return cls(None)
        m = re.fullmatch(r"GF\(\s*(\d+)\s*\)", s)
        if not m:
            raise ValueError(f"unknown field {text!r}; expected QQ or GF(<p>)")
        return cls(int(m.group(1)))

    @property
    def kind(self) -> str:
        return "exact-rationals" if self.modulus is None else "prime-field"

    @property
    def characteristic(self) -> int:
        return 0 if self.modulus is None else self.modulus

    def __str__(self):
        return "QQ" if self.modulus is None else f"GF({self.modulus})"

    def __call__(self, value) -> int | Fraction:
        """Coerce an int, Fraction or ``"a/b"`` string into the field."""
        p = self.modulus
        if isinstance(value, str):
            value = Fraction(value)
        if p is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"{value} has no image in GF({p})")
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p

    def inv(self, c):
        if self.modulus is None:
            return 1 / Fraction(c)
        return pow(c, -1, self.modulus)

    def signed(self, c):
        """Representative used for printing: symmetric residues in GF(p)."""
        p = self.modulus
        if p is not None and c > p // 2:
            return c - p
        return c


QQ = FieldSpec.rationals()
GF32003 = FieldSpec.prime(DEFAULT_PRIME)


class WeightedRing:
    """Polynomial ring k[x_1..x_n] with positive integer variable weights.

    The variable order is significant: it breaks ties in the canonical term
    order (reverse-lexicographic on the declared order).
    """

    def __init__(self, variables: Sequence[str], weights: Sequence[int] | None = None,
                 field: FieldSpec = QQ):
        variables = tuple(variables)
        weights = tuple(weights) if weights is not None else (1,) * len(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"variable names must be distinct: {variables}")
        if len(weights) != len(variables):
            raise ValueError("one weight per variable required")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise ValueError(f"bad variable name {v!r}")
        if any((not isinstance(w, int)) or w < 1 for w in weights):
            raise ValueError(f"weights must be positive integers: {weights}")
        self.variables = variables
        self.weights = weights
        self.field = field
        self._index = {v: i for i, v in enumerate(variables)}

    @classmethod
    def parse(cls, line: str) -> "WeightedRing":
        """Parse ``ring x:1 y:2 ... over QQ|GF(p)``."""
        m = re.fullmatch(r"\s*ring\s+(.*?)\s+over\s+(\S+)\s*", line)
        if not m:
            raise ValueError(f"bad ring declaration {line!r}")
        names, weights = [], []
        for item in m.group(1).split():
            vm = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*):(\d+)", item)
            if not vm:
                raise ValueError(f"bad variable declaration {item!r}")
            names.append(vm.group(1))
            weights.append(int(vm.group(2)))
        return cls(names, weights, FieldSpec.parse(m.group(2)))

    def declaration(self) -> str:
        decl = " ".join(f"{v}:{w}" for v, w in zip(self.variables, self.weights))
        return f"ring {decl} over {self.field}"

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r} in {self}") from None

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        return (isinstance(other, WeightedRing) and self.variables == other.variables
                and self.weights == other.weights and self.field == other.field)

    def __hash__(self):
        return hash((self.variables, self.weights, self.field))

    def __repr__(self):
        return f"WeightedRing({self.declaration()!r})"

    def with_field(self, field: FieldSpec) -> "WeightedRing":
        return WeightedRing(self.variables, self.weights, field)

    def drop(self, names: Iterable[str]) -> "WeightedRing":
        names = set(names)
        keep = [(v, w) for v, w in zip(self.variables, self.weights) if v not in names]
        return WeightedRing([v for v, _ in keep], [w for _, w in keep], self.field)

    # constructors
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: self.field(c)})

    def var(self, name: str) -> "Polynomial":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Polynomial(self, {tuple(e): self.field(1)})

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.var(v) for v in self.variables)

    def monomial(self, exps: Sequence[int], coeff=1) -> "Polynomial":
        return Polynomial(self, {tuple(exps): self.field(coeff)})

    def __call__(self, text: str, **bindings: "Polynomial") -> "Polynomial":
        return parse(text, self, bindings)

    def degree_of(self, exps: Sequence[int]) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))

    def monomials_of_degree(self, d: int) -> list[tuple[int, ...]]:
        """All exponent vectors of weighted degree ``d``, in descending term order."""
        return list(monomials_of_degree(self.weights, d))


@lru_cache(maxsize=None)
def monomials_of_degree(weights: tuple[int, ...], d: int) -> tuple[tuple[int, ...], ...]:
    """Weighted compositions: exponent vectors ``e`` with ``sum(e_i * w_i) == d``.

    Sorted by the canonical (degree-reverse-lexicographic) order, largest first.
    """
    if d < 0:
        return ()
    n = len(weights)
    out = []

    def rec(i, remaining, prefix):
        if i == n - 1:
            if remaining % weights[i] == 0:
                out.append(tuple(prefix) + (remaining // weights[i],))
            return
        for e in range(remaining // weights[i] + 1):
            prefix.append(e)
            rec(i + 1, remaining - e * weights[i], prefix)
            prefix.pop()

    if n == 0:
        return ((),) if d == 0 else ()
    rec(0, d, [])
    out.sort(key=_revlex_key, reverse=True)
    return tuple(out)


def _revlex_key(exps):
    # within one weighted degree: smaller exponent in the last variable is larger
    return tuple(-e for e in reversed(exps))


class Polynomial:
    """Immutable sparse polynomial in a :class:`WeightedRing`."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: WeightedRing, terms: Mapping[tuple[int, ...], object] | None = None,
                 *, _normalized: bool = False):
        self.ring = ring
        if _normalized:
            self._terms = dict(terms)
        else:
            field = ring.field
            clean = {}
            n = ring.nvars
            for exps, c in (terms or {}).items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != n or any(e < 0 for e in exps):
                    raise ValueError(f"bad exponent vector {exps} for {ring}")
                c = field(c)
                if c:
                    clean[exps] = clean.get(exps, 0) + c
            if field.modulus is not None:
                clean = {m: c % field.modulus for m, c in clean.items()}
            self._terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    # ---- basic protocol -------------------------------------------------
    @property
    def terms(self) -> Mapping[tuple[int, ...], object]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exps: Sequence[int]):
        return self._terms.get(tuple(exps), 0)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self.ring.declaration()!r}, {format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)

    # ---- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def _combine(self, other, sign):
        other = self._coerce(other)
        p = self.ring.field.modulus
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + sign * c
            if p is not None:
                v %= p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out, _normalized=True)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self)._combine(other, 1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "Polynomial":
        field = self.ring.field
        c = field(c)
        if not c:
            return self.ring.zero()
        p = field.modulus
        if p is None:
            out = {m: v * c for m, v in self._terms.items()}
        else:
            out = {m: v * c % p for m, v in self._terms.items()}
        return Polynomial(self.ring, out, _normalized=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        p = self.ring.field.modulus
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        if p is not None:
            out = {m: c % p for m, c in out.items()}
        return Polynomial(self.ring, {m: c for m, c in out.items() if c}, _normalized=True)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, c):
        if isinstance(c, Polynomial):
            raise TypeError("polynomial division is not supported; use normal forms")
        return self.scale(self.ring.field.inv(self.ring.field(c)))

    # ---- grading --------------------------------------------------------
    def degrees(self) -> set[int]:
        return {self.ring.degree_of(m) for m in self._terms}

    def weighted_degree(self) -> int | None:
        """Common weighted degree of all terms, or ``None`` if inhomogeneous."""
        if not self._terms:
            raise ValueError("the zero polynomial has no degree")
        degs = self.degrees()
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self) -> bool:
        return bool(self._terms) and self.weighted_degree() is not None

    def max_degree(self) -> int:
        if not self._terms:
            raise ValueError("the zero polynomial has no degree")
        return max(self.degrees())

    def variables_used(self) -> set[str]:
        used = set()
        for m in self._terms:
            used.update(v for v, e in zip(self.ring.variables, m) if e)
        return used

    def sorted_terms(self):
        """Terms in canonical order: weighted degree descending, then reverse-lex."""
        deg = self.ring.degree_of
        return sorted(self._terms.items(), key=lambda t: (deg(t[0]), _revlex_key(t[0])),
                      reverse=True)

    # ---- ring changes ---------------------------------------------------
    def to_ring(self, ring: WeightedRing) -> "Polynomial":
        """Re-express in ``ring`` by matching variable names."""
        used = self.variables_used()
        missing = used - set(ring.variables)
        if missing:
            raise RingMismatchError(f"variables {sorted(missing)} not in target ring {ring}")
        idx = [ring.index(v) if v in ring else None for v in self.ring.variables]
        out = {}
        for m, c in self._terms.items():
            e = [0] * ring.nvars
            for i, k in enumerate(m):
                if k:
                    e[idx[i]] = k
            out[tuple(e)] = c
        if ring.field != self.ring.field:
            if self.ring.field.modulus is not None:
                raise RingMismatchError("cannot lift prime-field coefficients")
            return Polynomial(ring, out)
        return Polynomial(ring, out, _normalized=True)

    def substitute(self, assignment: Mapping[str, "Polynomial"] | Sequence["Polynomial"],
                   target: WeightedRing | None = None) -> "Polynomial":
        return substitute(self, assignment, target)


def substitute(f: Polynomial, assignment, target: WeightedRing | None = None) -> Polynomial:
    """Compose ``f`` with per-variable polynomial targets.

    ``assignment`` is either a sequence with one target per variable of
    ``f.ring`` or a mapping from variable name to target; unmapped variables
    are sent to the variable of the same name in the target ring.
    """
    src = f.ring
    if isinstance(assignment, Mapping):
        unknown = set(assignment) - set(src.variables)
        if unknown:
            raise KeyError(f"unknown variables {sorted(unknown)}")
        if target is None:
            rings = {g.ring for g in assignment.values()}
            target = rings.pop() if len(rings) == 1 else src
        images = [assignment[v] if v in assignment else target.var(v) for v in src.variables]
    else:
        images = list(assignment)
        if len(images) != src.nvars:
            raise ValueError(f"expected {src.nvars} targets, got {len(images)}")
        if target is None:
            target = images[0].ring if images else src
    for g in images:
        if g.ring != target:
            raise RingMismatchError("substitution targets must share one ring")
    if src.field != target.field and src.field.modulus is not None:
        raise RingMismatchError("cannot map prime-field coefficients into another field")

    powers: dict[tuple[int, int], Polynomial] = {}

    def power(i, k):
        key = (i, k)
        if key not in powers:
            powers[key] = images[i] ** k
        return powers[key]

    result = target.zero()
    for m, c in f.items():
        term = target.const(c)
        for i, k in enumerate(m):
            if k:
                term = term * power(i, k)
        result = result + term
    return result


BRANCH_RING = WeightedRing(["x0", "x1", "y"], [1, 1, 2])


def substitute_cleared(f: Polynomial, clearing_exponent: int = 4) -> Polynomial:
    """Return ``x1^k * f(z -> y^2/x1, w -> y^3/x1^2)`` as a polynomial in (x0, x1, y).

    ``f`` may use the variables x0, x1, y, z, w (any others must not occur).
    Raises :class:`ClearingError` naming the worst monomial if ``k`` is too
    small to clear every denominator.
    """
    ring = f.ring
    allowed = {"x0", "x1", "y", "z", "w"}
    extra = f.variables_used() - allowed
    if extra:
        raise ValueError(f"substitution input involves {sorted(extra)}; only x0, x1, y, z, w allowed")

    def exp_of(m, name):
        return m[ring.index(name)] if name in ring else 0

    target = BRANCH_RING.with_field(ring.field)
    out = {}
    worst = None
    for m, c in f.items():
        a, b, yy = exp_of(m, "x0"), exp_of(m, "x1"), exp_of(m, "y")
        d, e = exp_of(m, "z"), exp_of(m, "w")
        x1_exp = b - d - 2 * e + clearing_exponent
        if x1_exp < 0 and (worst is None or x1_exp < worst[1]):
            worst = (m, x1_exp)
        key = (a, x1_exp, yy + 2 * d + 3 * e)
        out[key] = out.get(key, 0) + c
    if worst is not None:
        mono = format_poly(Polynomial(ring, {worst[0]: 1}))
        raise ClearingError(
            f"clearing exponent {clearing_exponent} insufficient: {mono} leaves x1^{worst[1]}",
            mono, worst[1])
    return Polynomial(target, out)


# ---------------------------------------------------------------------------
# formatting and parsing

def _format_coeff(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


def format_poly(f: Polynomial) -> str:
    """Render terms in descending canonical order, e.g. ``x^2*y - 1/2*z + 3``."""
    if not f:
        return "0"
    names = f.ring.variables
    field = f.ring.field
    parts = []
    for m, c in f.sorted_terms():
        c = field.signed(c)
        neg = c < 0
        a = -c if neg else c
        mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e)
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class _Parser:
    def __init__(self, text: str, ring: WeightedRing, bindings: Mapping[str, Polynomial]):
        self.text = text
        self.ring = ring
        self.bindings = bindings
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                break
            if m.group(0).strip():
                start = m.start(m.lastindex)
                kind = ("int", "name", "op")[m.lastindex - 1]
                self.tokens.append((kind, m.group(m.lastindex), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def parse(self) -> Polynomial:
        if not self.tokens:
            self.error("empty expression")
        result = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return result

    def expr(self):
        result = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self):
        result = self.unary()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            result = result * self.unary()
        return result

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "int":
                self.error("exponent must be a non-negative integer", tok)
            base = base ** int(tok[1])
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            num = int(val)
            if self.peek()[:2] == ("op", "/"):
                self.take()
                den = self.take()
                if den[0] != "int":
                    self.error("denominator must be an integer literal", den)
                if int(den[1]) == 0:
                    self.error("zero denominator", den)
                try:
                    return self.ring.const(Fraction(num, int(den[1])))
                except ZeroDivisionError:
                    self.error(f"denominator not invertible in {self.ring.field}", den)
            return self.ring.const(num)
        if kind == "name":
            if val in self.bindings:
                g = self.bindings[val]
                if g.ring != self.ring:
                    g = g.to_ring(self.ring)
                return g
            if val in self.ring:
                return self.ring.var(val)
            self.error(f"unknown variable {val!r}", tok)
        if val == "(":
            inner = self.expr()
            close = self.take()
            if close[1] != ")":
                self.error("expected ')'", close)
            return inner
        if kind == "end":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected {val!r}", tok)


def parse(text: str, ring: WeightedRing, bindings: Mapping[str, Polynomial] | None = None) -> Polynomial:
    """Parse a polynomial expression in ``ring``.

    Grammar: integers, rationals ``a/b``, variables, ``+ - * ^`` and
    parentheses; names in ``bindings`` stand for previously built polynomials.
    """
    return _Parser(text, ring, bindings or {}).parse()


def random_homogeneous(ring: WeightedRing, degree: int, rng, variables: Iterable[str] | None = None,
                       coeff_range: int = 9) -> Polynomial:
    """Dense random homogeneous polynomial of the given weighted degree.

    Every monomial of the degree (restricted to ``variables``) gets an
    independent coefficient: uniform in GF(p), or a small integer in
    ``[-coeff_range, coeff_range]`` over the rationals.
    """
    allowed = set(ring.variables if variables is None else variables)
    mask = [v in allowed for v in ring.variables]
    p = ring.field.modulus
    terms = {}
    for m in monomials_of_degree(ring.weights, degree):
        if any(e and not ok for e, ok in zip(m, mask)):
            continue
        terms[m] = rng.randrange(p) if p else rng.randint(-coeff_range, coeff_range)
    return Polynomial(ring, terms)

"""Laurent polynomials in t_i = e^{alpha_i}, characters of chains, and the
symbolic Demazure operators T_i used as an independent oracle."""
from __future__ import annotations

import math
from collections import defaultdict
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import CosetNotStable, ShapeMismatch
from .string_space import fraction_json, to_fraction, to_point


class LaurentPolynomial:
    """Integer combination of monomials e^y, y a rational exponent vector.

    Exponents are stored as integer vectors over one shared denominator.
    Instances are immutable and kept in canonical form.
    """

    __slots__ = ("nvars", "denominator", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping | None = None, denominator: int = 1):
        self.nvars = int(nvars)
        clean = {}
        for e, c in (terms or {}).items():
            if c:
                if len(e) != self.nvars:
                    raise ShapeMismatch(f"exponent {e} has length {len(e)}, expected {self.nvars}")
                e = tuple(int(v) for v in e)
                clean[e] = clean.get(e, 0) + int(c)
        clean = {e: c for e, c in clean.items() if c}
        g = denominator
        for e in clean:
            for v in e:
                g = math.gcd(g, v)
                if g == 1:
                    break
        if not clean:
            g = denominator
        if g > 1:
            clean = {tuple(v // g for v in e): c for e, c in clean.items()}
            denominator //= g
        if not clean:
            denominator = 1
        self.denominator = denominator
        self._terms = clean
        self._hash = None

    # -- construction ---------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "LaurentPolynomial":
        return cls(nvars)

    @classmethod
    def from_fraction_terms(cls, nvars: int, terms: Mapping) -> "LaurentPolynomial":
        """Build from ``{tuple of rationals: coeff}``."""
        terms = {to_point(e): c for e, c in terms.items()}
        den = 1
        for e in terms:
            for v in e:
                den = math.lcm(den, v.denominator)
        return cls(nvars, {tuple(int(v * den) for v in e): c for e, c in terms.items()}, den)

    @classmethod
    def monomial(cls, exponent, coeff: int = 1) -> "LaurentPolynomial":
        exponent = to_point(exponent)
        return cls.from_fraction_terms(len(exponent), {exponent: coeff})

    # -- access ---------------------------------------------------------------

    def terms(self) -> dict[tuple[Fraction, ...], int]:
        d = self.denominator
        return {tuple(Fraction(v, d) for v in e): c for e, c in self._terms.items()}

    def items(self) -> list[tuple[tuple[Fraction, ...], int]]:
        """Monomials sorted lexicographically by exponent."""
        return sorted(self.terms().items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def coefficient(self, exponent) -> int:
        return self.terms().get(to_point(exponent), 0)

    def total(self) -> int:
        """Value at t_1 = ... = t_r = 1."""
        return sum(self._terms.values())

    # -- arithmetic -----------------------------------------------------------

    def _aligned(self, other: "LaurentPolynomial"):
        if self.nvars != other.nvars:
            raise ShapeMismatch(f"{self.nvars} vs {other.nvars} variables")
        den = math.lcm(self.denominator, other.denominator)
        a, b = den // self.denominator, den // other.denominator
        left = {tuple(v * a for v in e): c for e, c in self._terms.items()}
        right = {tuple(v * b for v in e): c for e, c in other._terms.items()}
        return den, left, right

    def __add__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        den, left, right = self._aligned(other)
        out = defaultdict(int, left)
        for e, c in right.items():
            out[e] += c
        return LaurentPolynomial(self.nvars, out, den)

    def __neg__(self):
        return LaurentPolynomial(self.nvars, {e: -c for e, c in self._terms.items()}, self.denominator)

    def __sub__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPolynomial(self.nvars, {e: c * other for e, c in self._terms.items()}, self.denominator)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        den, left, right = self._aligned(other)
        out = defaultdict(int)
        for e1, c1 in left.items():
            for e2, c2 in right.items():
                out[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
        return LaurentPolynomial(self.nvars, out, den)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.denominator == other.denominator
            and self._terms == other._terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.denominator, frozenset(self._terms.items())))
        return self._hash

    def first_difference(self, other: "LaurentPolynomial"):
        """Smallest exponent where the two differ, with both coefficients, or None."""
        a, b = self.terms(), other.terms()
        diff = sorted(e for e in set(a) | set(b) if a.get(e, 0) != b.get(e, 0))
        if not diff:
            return None
        e = diff[0]
        return e, a.get(e, 0), b.get(e, 0)

    # -- output ---------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "denominator": self.denominator,
            "terms": [{"exp": list(e), "coeff": c} for e, c in sorted(self._terms.items())],
        }

    @classmethod
    def from_json(cls, data: Mapping, nvars: int | None = None) -> "LaurentPolynomial":
        terms = {tuple(t["exp"]): t["coeff"] for t in data["terms"]}
        if nvars is None:
            if not terms:
                raise ShapeMismatch("cannot infer the variable count of an empty polynomial")
            nvars = len(next(iter(terms)))
        return cls(nvars, terms, int(data.get("denominator", 1)))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = " ".join(
                f"t_{k + 1}" if v == 1 else f"t_{k + 1}^{fraction_json(v)}"
                for k, v in enumerate(e) if v
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"LaurentPolynomial({self})"


def chi(chain) -> LaurentPolynomial:
    """Character: sum of value(x) * e^{p(x)} over character-lattice points x."""
    space = chain.space
    q = chain.q
    acc: dict = defaultdict(int)
    slices = [space.block_slice(i) for i in range(1, space.rank + 1)]
    for p, v in chain.pointwise().items():
        if not chain.on_character_lattice(p):
            continue
        acc[tuple(sum(p[k] for k in s) for s in slices)] += v
    return LaurentPolynomial(space.rank, acc, q)


def geometric_segment(mu, nu, i: int, nvars: int) -> LaurentPolynomial:
    """t_i^mu + ... + t_i^nu, continued to nu < mu as minus the open interval.

    ``i`` is 1-based. mu and nu may be rationals in the same coset of Z.
    """
    mu, nu = to_fraction(mu), to_fraction(nu)
    if (nu - mu).denominator != 1:
        raise CosetNotStable(f"segment endpoints {mu} and {nu} lie in different cosets of Z")
    if not 1 <= i <= nvars:
        raise ShapeMismatch(f"variable {i} outside 1..{nvars}")

    def mono(v):
        e = [Fraction(0)] * nvars
        e[i - 1] = v
        return tuple(e)

    if mu <= nu:
        terms = {mono(mu + k): 1 for k in range(int(nu - mu) + 1)}
    else:
        terms = {mono(nu + k): -1 for k in range(1, int(mu - nu))}
    return LaurentPolynomial.from_fraction_terms(nvars, terms)


def _l_matrix(source) -> tuple:
    return source.l_matrix


def demazure_T(source, i: int, f: LaurentPolynomial) -> LaurentPolynomial:
    """[T_i f](y) = (f(y) - t_i f(s_i y)) / (1 - t_i), monomial by monomial.

    ``source`` supplies the forms l_i through ``.l_matrix`` (a StringSpace or
    a CartanData).
    """
    C = _l_matrix(source)
    r = len(C)
    if f.nvars != r:
        raise ShapeMismatch(f"polynomial in {f.nvars} variables, operator of rank {r}")
    if not 1 <= i <= r:
        raise ShapeMismatch(f"index {i} outside 1..{r}")
    row = C[i - 1]
    den = f.denominator
    out: dict = defaultdict(int)
    for e, c in f._terms.items():
        m = e[i - 1]
        m_prime = sum(a * b for a, b in zip(row, e)) - m
        if (m_prime - m) % den:
            raise CosetNotStable(f"s_{i} moves exponent {e}/{den} off its coset")
        base = list(e)
        if m <= m_prime:
            for v in range(m, m_prime + 1, den):
                base[i - 1] = v
                out[tuple(base)] += c
        else:
            for v in range(m_prime + den, m, den):
                base[i - 1] = v
                out[tuple(base)] -= c
    return LaurentPolynomial(r, out, den)


def apply_T_word(source, word: Sequence[int], f: LaurentPolynomial) -> LaurentPolynomial:
    """T_{i_1} ... T_{i_k} f, applied right to left."""
    for i in reversed(list(word)):
        f = demazure_T(source, int(i), f)
    return f


def multiply_exponential(f: LaurentPolynomial, u) -> LaurentPolynomial:
    return f * LaurentPolynomial.monomial(u)


def project_degeneration(i: int, f: LaurentPolynomial) -> LaurentPolynomial:
    """Merge variables i and i+1 (1-based) by adding their exponents."""
    r1 = f.nvars
    if not 1 <= i < r1:
        raise ShapeMismatch(f"cannot merge variables {i} and {i + 1} of {r1}")
    out: dict = defaultdict(int)
    for e, c in f._terms.items():
        out[e[: i - 1] + (e[i - 1] + e[i],) + e[i + 1:]] += c
    return LaurentPolynomial(r1 - 1, out, f.denominator)


def project_blocks(f: LaurentPolynomial, groups: Sequence[Sequence[int]]) -> LaurentPolynomial:
    """Sum exponents over groups of variables (1-based), e.g. after a full degeneration."""
    out: dict = defaultdict(int)
    for e, c in f._terms.items():
        out[tuple(sum(e[k - 1] for k in g) for g in groups)] += c
    return LaurentPolynomial(len(groups), out, f.denominator)

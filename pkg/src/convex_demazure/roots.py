"""Finite root systems in simple-root coordinates.

Weights are written in the basis alpha_1, ..., alpha_r (rational coordinates),
matching the weight map of a string space.  ``A[k][i]`` is the pairing
<alpha_k, alpha_i^vee>, so s_i(beta) = beta - <beta, alpha_i^vee> alpha_i.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import NotDominant, NotFiniteType, ShapeMismatch
from .string_space import to_point

MAX_ROOTS = 500


@dataclass(frozen=True)
class CartanData:
    matrix: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        A = tuple(tuple(int(v) for v in row) for row in self.matrix)
        r = len(A)
        if r == 0 or any(len(row) != r for row in A):
            raise ShapeMismatch("Cartan matrix must be square and nonempty")
        for i in range(r):
            if A[i][i] != 2:
                raise ShapeMismatch(f"diagonal entry {i} is {A[i][i]}, expected 2")
            for k in range(r):
                if k != i and (A[i][k] > 0 or (A[i][k] == 0) != (A[k][i] == 0)):
                    raise ShapeMismatch(f"bad off-diagonal pair at ({i}, {k})")
        object.__setattr__(self, "matrix", A)

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @property
    def l_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Forms l_i(y) = sum_k (alpha_k, alpha_i) y_k with (alpha_k, alpha_i) = -A[k][i]."""
        r = self.rank
        return tuple(tuple(0 if k == i else -self.matrix[k][i] for k in range(r)) for i in range(r))

    def pair_coroot(self, beta, i: int):
        """<beta, alpha_i^vee> for beta in alpha coordinates (i is 1-based)."""
        return sum(b * self.matrix[k][i - 1] for k, b in enumerate(beta))

    def reflect(self, i: int, beta) -> tuple:
        c = self.pair_coroot(beta, i)
        beta = list(beta)
        beta[i - 1] -= c
        return tuple(beta)

    @cached_property
    def symmetrizer(self) -> tuple[Fraction, ...]:
        """Positive eps_i with A[i][j] eps_j symmetric (eps = 1 on one root per component)."""
        r = self.rank
        A = self.matrix
        eps: list[Fraction | None] = [None] * r
        for start in range(r):
            if eps[start] is not None:
                continue
            eps[start] = Fraction(1)
            stack = [start]
            while stack:
                i = stack.pop()
                for j in range(r):
                    if j != i and A[i][j]:
                        # A[i][j] eps_j = A[j][i] eps_i
                        val = Fraction(A[j][i], A[i][j]) * eps[i]
                        if eps[j] is None:
                            eps[j] = val
                            stack.append(j)
                        elif eps[j] != val:
                            raise NotFiniteType("Cartan matrix is not symmetrizable")
        return tuple(eps)

    def form(self, x, y) -> Fraction:
        """Invariant bilinear form on alpha coordinates."""
        A, eps = self.matrix, self.symmetrizer
        total = Fraction(0)
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj and A[i][j]:
                    total += xi * yj * A[i][j] * eps[j]
        return total

    @cached_property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        return tuple(positive_roots(self))

    @cached_property
    def rho(self) -> tuple[Fraction, ...]:
        r = self.rank
        return tuple(Fraction(sum(a[k] for a in self.positive_roots), 2) for k in range(r))

    def dynkin_labels(self, lam) -> tuple:
        return tuple(self.pair_coroot(lam, i) for i in range(1, self.rank + 1))

    def is_dominant(self, lam) -> bool:
        labels = self.dynkin_labels(lam)
        return all(Fraction(v).denominator == 1 and v >= 0 for v in labels)

    def from_labels(self, labels) -> tuple[Fraction, ...]:
        """Alpha coordinates of the weight with the given Dynkin labels."""
        return solve_rational([list(col) for col in zip(*self.matrix)], to_point(labels))


def solve_rational(M, b) -> tuple[Fraction, ...]:
    """Solve M x = b exactly (M square, invertible)."""
    n = len(M)
    aug = [[Fraction(v) for v in row] + [Fraction(bi)] for row, bi in zip(M, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * c for a, c in zip(aug[r], aug[col])]
    return tuple(row[n] for row in aug)


def positive_roots(cartan: CartanData) -> list[tuple[int, ...]]:
    """Close the simple roots under simple reflections; keep the positive ones."""
    r = cartan.rank
    simple = [tuple(1 if k == i else 0 for k in range(r)) for i in range(r)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(1, r + 1):
                gamma = cartan.reflect(i, beta)
                if gamma not in seen:
                    seen.add(gamma)
                    nxt.append(gamma)
                    if len(seen) > MAX_ROOTS:
                        raise NotFiniteType("root closure does not terminate; not of finite type")
        frontier = nxt
    return sorted((b for b in seen if all(v >= 0 for v in b)), key=lambda b: (sum(b), b))


def weyl_dimension(cartan: CartanData, lam) -> int:
    lam = to_point(lam)
    if not cartan.is_dominant(lam):
        raise NotDominant(f"{lam} is not dominant")
    rho = cartan.rho
    lr = tuple(a + b for a, b in zip(lam, rho))
    num = Fraction(1)
    for alpha in cartan.positive_roots:
        num *= cartan.form(lr, alpha) / cartan.form(rho, alpha)
    assert num.denominator == 1
    return int(num)


def dominant_conjugate(cartan: CartanData, mu) -> tuple:
    mu = tuple(mu)
    while True:
        for i in range(1, cartan.rank + 1):
            if cartan.pair_coroot(mu, i) < 0:
                mu = cartan.reflect(i, mu)
                break
        else:
            return mu


def lowest_weight(cartan: CartanData, lam) -> tuple:
    """w_0(lam): reflect until antidominant."""
    mu = tuple(lam)
    while True:
        for i in range(1, cartan.rank + 1):
            if cartan.pair_coroot(mu, i) > 0:
                mu = cartan.reflect(i, mu)
                break
        else:
            return mu


def _compositions(total: int, bounds: Sequence[int]):
    if len(bounds) == 1:
        if total <= bounds[0]:
            yield (total,)
        return
    for first in range(min(total, bounds[0]) + 1):
        for rest in _compositions(total - first, bounds[1:]):
            yield (first,) + rest


def freudenthal_multiplicities(cartan: CartanData, lam) -> dict[tuple[Fraction, ...], int]:
    """Weight multiplicities of the irreducible module with highest weight ``lam``."""
    lam = to_point(lam)
    if not cartan.is_dominant(lam):
        raise NotDominant(f"{lam} is not dominant")
    r = cartan.rank
    depth = tuple(a - b for a, b in zip(lam, lowest_weight(cartan, lam)))
    bounds = tuple(int(v) for v in depth)
    max_level = sum(bounds)
    rho = cartan.rho
    lr = tuple(a + b for a, b in zip(lam, rho))
    norm_top = cartan.form(lr, lr)
    pos = cartan.positive_roots

    def is_weight(mu):
        dom = dominant_conjugate(cartan, mu)
        return all(a - b >= 0 for a, b in zip(lam, dom))

    mult: dict[tuple, int] = {lam: 1}
    for level in range(1, max_level + 1):
        for n in _compositions(level, bounds):
            mu = tuple(a - b for a, b in zip(lam, n))
            if not is_weight(mu):
                continue
            acc = Fraction(0)
            for alpha in pos:
                k = 1
                while True:
                    nu = tuple(m + k * a for m, a in zip(mu, alpha))
                    if any(a - b < 0 for a, b in zip(lam, nu)):
                        break
                    m_nu = mult.get(nu, 0)
                    if m_nu:
                        acc += m_nu * cartan.form(nu, alpha)
                    k += 1
            mr = tuple(a + b for a, b in zip(mu, rho))
            denom = norm_top - cartan.form(mr, mr)
            value = 2 * acc / denom
            assert value.denominator == 1 and value > 0
            mult[mu] = int(value)
    return mult


def longest_word(cartan: CartanData) -> tuple[int, ...]:
    """A reduced word for w_0, found by driving a regular dominant weight to
    the antidominant chamber one simple reflection at a time."""
    r = cartan.rank
    v = list(cartan.from_labels([1] * r))
    word = []
    while True:
        for i in range(1, r + 1):
            if cartan.pair_coroot(v, i) > 0:
                v = list(cartan.reflect(i, v))
                word.append(i)
                break
        else:
            break
    word = tuple(word)
    if len(word) != len(cartan.positive_roots):
        raise NotFiniteType("longest word length does not match the number of positive roots")
    return word


def is_reduced(cartan: CartanData, word: Sequence[int]) -> bool:
    """s_{i_1} ... s_{i_k} is reduced iff each s_{i_1}..s_{i_{m-1}}(alpha_{i_m}) is positive."""
    r = cartan.rank
    for m, i in enumerate(word):
        beta = tuple(1 if k == i - 1 else 0 for k in range(r))
        for j in reversed(word[:m]):
            beta = cartan.reflect(j, beta)
        if not all(b >= 0 for b in beta):
            return False
    return True


# -- named types ------------------------------------------------------------

def _from_roots(simple, name) -> CartanData:
    def dot(a, b):
        return sum(Fraction(x) * y for x, y in zip(a, b))

    r = len(simple)
    A = [[int(2 * dot(simple[k], simple[i]) / dot(simple[i], simple[i])) for i in range(r)] for k in range(r)]
    return CartanData(tuple(tuple(row) for row in A), name)


def _e(n, *entries):
    v = [Fraction(0)] * n
    for idx, val in entries:
        v[idx] = Fraction(val)
    return v


def cartan_type(name: str) -> CartanData:
    """Bourbaki-numbered finite types: A_n, B_n (alpha_n short), C_n (alpha_n long),
    D_n, G_2 (alpha_1 short), F_4.  In C_2 the first root is the short one."""
    kind, n = name[0].upper(), int(name[1:].lstrip("_"))
    if kind == "A" and n >= 1:
        roots = [_e(n + 1, (i, 1), (i + 1, -1)) for i in range(n)]
    elif kind == "B" and n >= 2:
        roots = [_e(n, (i, 1), (i + 1, -1)) for i in range(n - 1)] + [_e(n, (n - 1, 1))]
    elif kind == "C" and n >= 2:
        roots = [_e(n, (i, 1), (i + 1, -1)) for i in range(n - 1)] + [_e(n, (n - 1, 2))]
    elif kind == "D" and n >= 3:
        roots = [_e(n, (i, 1), (i + 1, -1)) for i in range(n - 1)] + [_e(n, (n - 2, 1), (n - 1, 1))]
    elif kind == "G" and n == 2:
        roots = [_e(3, (0, 1), (1, -1)), _e(3, (0, -2), (1, 1), (2, 1))]
    elif kind == "F" and n == 4:
        h = Fraction(1, 2)
        roots = [_e(4, (1, 1), (2, -1)), _e(4, (2, 1), (3, -1)), _e(4, (3, 1)), _e(4, (0, h), (1, -h), (2, -h), (3, -h))]
    else:
        raise ValueError(f"unsupported Cartan type {name!r}")
    return _from_roots(roots, f"{kind}{n}")

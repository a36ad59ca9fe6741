"""Inequality-described polytopes and exact convex hulls of lattice point sets.

Used only for cross-checks and export; the operator pipeline never reads
H-representations.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence

from .string_space import fraction_json, to_fraction


# -- exact linear algebra ---------------------------------------------------

def row_reduce(rows):
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    m = [[Fraction(v) for v in r] for r in rows]
    pivots = []
    lead = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((r for r in range(lead, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[lead], m[piv] = m[piv], m[lead]
        pv = m[lead][col]
        m[lead] = [v / pv for v in m[lead]]
        for r in range(len(m)):
            if r != lead and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[lead])]
        pivots.append(col)
        lead += 1
        if lead == len(m):
            break
    return m[:lead], pivots


def rank(rows) -> int:
    if not rows:
        return 0
    return len(row_reduce(rows)[1])


def nullspace(rows, ncols: int) -> list[list[Fraction]]:
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = row_reduce(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in zip(red, pivots):
            v[pc] = -r[f]
        basis.append(v)
    return basis


def primitive(v) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    den = 1
    for x in v:
        den = math.lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


# -- H-polytopes ------------------------------------------------------------

@dataclass(frozen=True)
class Inequality:
    """<normal, x> <= bound, or < bound when ``strict``."""

    normal: tuple[int, ...]
    bound: Fraction
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "normal", tuple(int(v) for v in self.normal))
        object.__setattr__(self, "bound", to_fraction(self.bound))

    def holds(self, x) -> bool:
        s = dot(self.normal, x)
        return s < self.bound if self.strict else s <= self.bound


def leq(lhs: dict, rhs: dict, dim: int, strict: bool = False) -> Inequality:
    """Inequality sum(lhs) <= sum(rhs) from ``{index or None: coeff}`` maps (None = constant)."""
    normal = [0] * dim
    const = Fraction(0)
    for side, sign in ((lhs, 1), (rhs, -1)):
        for k, c in side.items():
            if k is None:
                const -= sign * to_fraction(c)
            else:
                normal[k] += sign * c
    return Inequality(tuple(normal), const, strict)


@dataclass(frozen=True)
class HPolytope:
    dim: int
    ineqs: tuple[Inequality, ...]

    def contains(self, x) -> bool:
        return all(h.holds(x) for h in self.ineqs)

    def vertices(self) -> list[tuple[Fraction, ...]]:
        """Vertices of the closure, by intersecting d tight constraints at a time."""
        d = self.dim
        found = set()
        rows = [list(h.normal) for h in self.ineqs]
        for combo in itertools.combinations(range(len(rows)), d):
            sub = [rows[c] + [self.ineqs[c].bound] for c in combo]
            red, pivots = row_reduce(sub)
            if len(pivots) != d or d in pivots:
                continue
            x = tuple(r[d] for r in red)
            if all(dot(h.normal, x) <= h.bound for h in self.ineqs):
                found.add(x)
        return sorted(found)

    def is_bounded(self) -> bool:
        d = self.dim
        rows = [list(h.normal) for h in self.ineqs]
        if rank(rows) < d:
            return False
        for combo in itertools.combinations(range(len(rows)), d - 1):
            sub = [rows[c] for c in combo]
            ns = nullspace(sub, d)
            if len(ns) != 1:
                continue
            ray = ns[0]
            for sgn in (1, -1):
                if all(sgn * dot(r, ray) <= 0 for r in rows):
                    return False
        return True

    def bounding_box(self) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        if not self.is_bounded():
            raise ValueError("polytope is unbounded")
        vs = self.vertices()
        if not vs:
            raise ValueError("polytope is empty")
        return tuple(map(min, zip(*vs))), tuple(map(max, zip(*vs)))

    def lattice_points(self, q: int = 1, shift=None) -> set[tuple[int, ...]]:
        """Scaled points v with v/q in the polytope (and in ``shift + Z^d`` if given)."""
        try:
            lo, hi = self.bounding_box()
        except ValueError as exc:
            if "empty" in str(exc):
                return set()
            raise
        lo_s = [math.ceil(v * q) for v in lo]
        hi_s = [math.floor(v * q) for v in hi]
        checks = []
        for h in self.ineqs:
            den = h.bound.denominator
            checks.append(([c * den for c in h.normal], h.bound.numerator * q, h.strict))
        out = set()
        ranges = [range(a, b + 1) for a, b in zip(lo_s, hi_s)]
        sq = None if shift is None else [to_fraction(s) * q for s in shift]
        for v in itertools.product(*ranges):
            ok = True
            for normal, rhs, strict in checks:
                s = dot(normal, v)
                if s > rhs or (strict and s == rhs):
                    ok = False
                    break
            if ok and sq is not None:
                ok = all((c - s) % q == 0 for c, s in zip(v, sq))
            if ok:
                out.add(v)
        return out

    def to_json(self) -> dict:
        out = []
        for h in self.ineqs:
            item = {"normal": list(h.normal), "bound": str(fraction_json(h.bound))}
            if h.strict:
                item["strict"] = True
            out.append(item)
        return {"dim": self.dim, "ineqs": out}

    @classmethod
    def from_json(cls, data) -> "HPolytope":
        ineqs = tuple(Inequality(tuple(i["normal"]), i["bound"], bool(i.get("strict", False))) for i in data["ineqs"])
        dim = data.get("dim", len(ineqs[0].normal) if ineqs else 0)
        return cls(dim, ineqs)


# -- convex hulls of lattice point sets --------------------------------------

def affine_frame(points: Sequence[Sequence[int]]):
    """Dimension k of the affine hull and k coordinates on which projection is injective."""
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    diffs = [d for d in diffs if any(d)]
    if not diffs:
        return 0, ()
    red, pivots = row_reduce(diffs)
    return len(pivots), tuple(pivots)


def _hull_candidates(pts: set) -> list:
    """Drop points that are midpoints of two axis neighbours in the set."""
    out = []
    d = len(next(iter(pts)))
    for p in pts:
        inner = False
        for k in range(d):
            a = p[:k] + (p[k] - 1,) + p[k + 1:]
            b = p[:k] + (p[k] + 1,) + p[k + 1:]
            if a in pts and b in pts:
                inner = True
                break
        if not inner:
            out.append(p)
    return sorted(out)


def hull_facets(points: Iterable[Sequence[int]]):
    """Exact facets of conv(points) inside the affine hull.

    Returns ``(k, coords, facets)`` where facets are ``(normal, offset, vertex
    indices into the candidate list)`` expressed in the projected coordinates,
    and the candidate list itself.
    """
    pts = {tuple(p) for p in points}
    if not pts:
        return 0, (), [], []
    ordered = sorted(pts)
    k, coords = affine_frame(ordered)
    cand = _hull_candidates(pts)
    proj = [tuple(p[c] for c in coords) for p in cand]
    facets = {}
    if k >= 2:
        for combo in itertools.combinations(range(len(proj)), k):
            base = proj[combo[0]]
            diffs = [[a - b for a, b in zip(proj[c], base)] for c in combo[1:]]
            ns = nullspace(diffs, k)
            if len(ns) != 1:
                continue
            n = primitive(ns[0])
            off = dot(n, base)
            side = 0
            ok = True
            for p in proj:
                s = dot(n, p) - off
                if s == 0:
                    continue
                sgn = 1 if s > 0 else -1
                if side == 0:
                    side = sgn
                elif sgn != side:
                    ok = False
                    break
            if not ok:
                continue
            if side > 0:
                n = tuple(-v for v in n)
                off = -off
            if (n, off) not in facets:
                on = tuple(idx for idx, p in enumerate(proj) if dot(n, p) == off)
                facets[(n, off)] = on
    return k, coords, [(n, off, on) for (n, off), on in sorted(facets.items())], cand


def hull_vertices(points: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    """Exact vertex set of the convex hull of integer points."""
    pts = sorted({tuple(p) for p in points})
    if not pts:
        return []
    k, coords, facets, cand = hull_facets(pts)
    if k == 0:
        return [pts[0]]
    if k == 1:
        c = coords[0]
        return sorted({min(pts, key=lambda p: p[c]), max(pts, key=lambda p: p[c])})
    tight: dict[int, list] = {i: [] for i in range(len(cand))}
    for n, _, on in facets:
        for idx in on:
            tight[idx].append(list(n))
    return sorted(cand[i] for i, normals in tight.items() if normals and rank(normals) == k)


def _angle_order(points2d, centre):
    """Exact counterclockwise sort of 2D points around ``centre``."""

    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    def cmp(a, b):
        va = (a[1][0] - centre[0], a[1][1] - centre[1])
        vb = (b[1][0] - centre[0], b[1][1] - centre[1])
        ha, hb = half(va), half(vb)
        if ha != hb:
            return ha - hb
        cross = va[0] * vb[1] - va[1] * vb[0]
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    return [i for i, _ in sorted(enumerate(points2d), key=cmp_to_key(cmp))]


def hull_mesh_3d(points: Iterable[Sequence[int]]):
    """Triangle mesh of conv(points) for points in Z^3.

    Returns ``(vertices, faces)``; faces index into ``vertices`` and are
    oriented outward.  Lower-dimensional hulls give a flat polygon, a segment
    or a point (with no or degenerate faces).
    """
    pts = sorted({tuple(p) for p in points})
    if not pts:
        return [], []
    verts = hull_vertices(pts)
    index = {v: i for i, v in enumerate(verts)}
    k, coords, facets, cand = hull_facets(pts)
    if k <= 1:
        return verts, []
    faces = []
    if k == 2:
        facet_sets = [(None, verts)]
    else:
        facet_sets = []
        for n, off, on in facets:
            facet_sets.append((n, [cand[i] for i in on if cand[i] in index]))
    for n, fverts in facet_sets:
        if len(fverts) < 3:
            continue
        if n is None:
            normal = None
            drop = [c for c in range(3) if c not in coords][0]
        else:
            normal = n
            drop = max(range(3), key=lambda c: abs(n[c]))
        keep = [c for c in range(3) if c != drop]
        flat = [(Fraction(v[keep[0]]), Fraction(v[keep[1]])) for v in fverts]
        centre = (sum(p[0] for p in flat) / len(flat), sum(p[1] for p in flat) / len(flat))
        order = [fverts[i] for i in _angle_order(flat, centre)]
        if normal is not None:
            a, b, c = order[0], order[1], order[2]
            u = [b[m] - a[m] for m in range(3)]
            w = [c[m] - a[m] for m in range(3)]
            cross = (u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0])
            if dot(cross, normal) < 0:
                order.reverse()
        for t in range(1, len(order) - 1):
            faces.append((index[order[0]], index[order[t]], index[order[t + 1]]))
    return verts, faces

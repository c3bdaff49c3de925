"""Pointed rational polyhedral cones in a lattice ``Z^d``.

Cones are described by their primitive extreme rays. Facet normals are
computed eagerly at construction, so a :class:`Cone` is immutable and safe to
share between threads.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import ceil, floor, gcd
from typing import Iterable, Sequence

from fantastack import kernels
from fantastack.lattice import (
    DimensionError,
    IntVector,
    det,
    dot,
    integer_kernel,
    primitive,
    rank,
    rational_inverse,
    snf,
    solve_rational,
)
from fantastack.motive import RationalMotive


class ConeError(ValueError):
    """Raised for cones outside the supported class (pointed, full-dimensional)."""


def _normal_of(vectors: Sequence[IntVector], d: int) -> IntVector | None:
    """Primitive normal of the hyperplane spanned by ``d - 1`` vectors."""
    if rank(vectors) != d - 1:
        return None
    (n,) = integer_kernel(vectors, d)
    return primitive(n)


class Cone:
    """A pointed cone given by generators in ``Z^d``.

    Generators are made primitive, deduplicated and reduced to the extreme
    rays, keeping first-occurrence order.

    Args:
        generators: nonzero integer vectors spanning the cone.
        ambient_rank: lattice rank; inferred from the generators if omitted.
    """

    __slots__ = ("d", "rays", "facet_normals", "full_dimensional")

    def __init__(self, generators: Iterable[Sequence[int]], ambient_rank: int | None = None):
        gens: list[IntVector] = []
        for g in generators:
            g = tuple(int(x) for x in g)
            if ambient_rank is None:
                ambient_rank = len(g)
            if len(g) != ambient_rank:
                raise DimensionError(f"generator {g} is not of length {ambient_rank}")
            if not any(g):
                raise ConeError("zero vector is not a ray generator")
            g = primitive(g)
            if g not in gens:
                gens.append(g)
        if ambient_rank is None:
            raise ConeError("cannot infer the ambient rank of an empty cone")
        d = ambient_rank
        full = bool(gens) and rank(gens) == d
        normals: tuple[IntVector, ...] | None = None
        if full:
            found = set()
            for sub in combinations(gens, d - 1):
                n = _normal_of(sub, d)
                if n is None:
                    continue
                pairings = [dot(g, n) for g in gens]
                if all(p >= 0 for p in pairings):
                    found.add(n)
                elif all(p <= 0 for p in pairings):
                    found.add(tuple(-x for x in n))
            normals = tuple(sorted(found))
            if rank(normals) != d:
                raise ConeError(f"cone generated by {gens} is not pointed")
            gens = [
                g for g in gens
                if rank([n for n in normals if dot(g, n) == 0]) == d - 1
            ]
        else:
            _check_pointed_lowdim(gens, d)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "rays", tuple(gens))
        object.__setattr__(self, "facet_normals", normals)
        object.__setattr__(self, "full_dimensional", full)

    def __setattr__(self, name, value):
        raise AttributeError("Cone is immutable")

    @property
    def dim(self) -> int:
        return rank(self.rays) if self.rays else 0

    def require_full_dimensional(self) -> None:
        if not self.full_dimensional:
            raise ConeError(
                f"cone with rays {list(self.rays)} is not full-dimensional in Z^{self.d}"
            )

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return self.d == other.d and set(self.rays) == set(other.rays)

    def __hash__(self):
        return hash((self.d, frozenset(self.rays)))

    def __repr__(self):
        return f"Cone({[list(r) for r in self.rays]})"


def _check_pointed_lowdim(gens, d):
    # pointedness is a rational property: test the cone in coordinates of its span
    if not gens:
        return
    basis = []
    for g in gens:
        if rank(basis + [g]) > len(basis):
            basis.append(g)
    cols = [list(col) for col in zip(*basis)]
    coords = []
    for g in gens:
        x = solve_rational(cols, g)
        den = 1
        for v in x:
            den = den * v.denominator // gcd(den, v.denominator)
        coords.append(tuple(int(v * den) for v in x))
    Cone(coords, len(basis))


def dual_cone(c: Cone) -> Cone:
    """The cone of functionals nonnegative on ``c``; its rays are the facet normals."""
    c.require_full_dimensional()
    return Cone(c.facet_normals, c.d)


def contains(c: Cone, w: Sequence[int]) -> bool:
    if len(w) != c.d:
        raise DimensionError(f"point {tuple(w)} is not of length {c.d}")
    c.require_full_dimensional()
    return all(dot(w, n) >= 0 for n in c.facet_normals)


def in_relative_interior(c: Cone, w: Sequence[int]) -> bool:
    c.require_full_dimensional()
    return all(dot(w, n) > 0 for n in c.facet_normals)


@dataclass(frozen=True)
class SimplicialConeData:
    """Linearly independent generators plus a half-open tag.

    ``open_generators`` lists positions ``i`` whose opposite facet is removed:
    points of the piece must have a strictly positive coefficient on
    ``generators[i]``.
    """

    generators: tuple[IntVector, ...]
    open_generators: frozenset[int] = field(default_factory=frozenset)

    @property
    def index(self) -> int:
        return abs(det(self.generators))


def parallelepiped_points(s: SimplicialConeData) -> list[IntVector]:
    """Lattice points ``sum lambda_i g_i`` with ``lambda_i`` in ``[0, 1)``, or
    ``(0, 1]`` for open generators; sorted lexicographically."""
    gens = s.generators
    d = len(gens)
    if d == 0 or len(gens[0]) != d:
        raise ConeError("parallelepiped enumeration needs a full-dimensional simplicial cone")
    gm = [[g[i] for g in gens] for i in range(d)]  # columns are generators
    dec = snf(gm)
    u_inv = rational_inverse(dec.U)
    g_inv = rational_inverse(gm)
    out = []
    for k in product(*(range(f) for f in dec.invariant_factors)):
        x = [sum(u_inv[i][j] * k[j] for j in range(d)) for i in range(d)]
        lam = [sum(g_inv[i][j] * x[j] for j in range(d)) for i in range(d)]
        frac = []
        for i, l in enumerate(lam):
            f = l - floor(l)
            if f == 0 and i in s.open_generators:
                f = Fraction(1)
            frac.append(f)
        pt = tuple(int(sum(frac[j] * gens[j][i] for j in range(d))) for i in range(d))
        out.append(pt)
    return sorted(out)


def graded_series_simplicial(s: SimplicialConeData, q: Sequence[int], m: int) -> RationalMotive:
    """Generating function ``sum t^<w, q>`` over the (half-open) simplicial cone,
    with ``t = L^(-1/m)``."""
    grades = [dot(g, q) for g in s.generators]
    if any(g <= 0 for g in grades):
        raise ConeError(f"grading {tuple(q)} is not positive on generators {s.generators}")
    num = Counter(dot(p, q) for p in parallelepiped_points(s))
    return RationalMotive(num, grades, m)


def _placing_triangulation(rays: list[IntVector], d: int) -> list[tuple[int, ...]]:
    init: list[int] = []
    for i in range(len(rays)):
        if rank([rays[j] for j in init + [i]]) == len(init) + 1:
            init.append(i)
        if len(init) == d:
            break
    simplices = [tuple(init)]
    for v in range(len(rays)):
        if v in init:
            continue
        facet_count = Counter()
        owner = {}
        for s in simplices:
            for f in combinations(s, d - 1):
                facet_count[f] += 1
                owner[f] = s
        new = []
        for f, cnt in facet_count.items():
            if cnt != 1:
                continue
            n = _normal_of([rays[i] for i in f], d)
            (opp,) = set(owner[f]) - set(f)
            if dot(rays[opp], n) < 0:
                n = tuple(-x for x in n)
            if dot(rays[v], n) < 0:
                new.append(tuple(sorted(f + (v,))))
        simplices.extend(new)
    return sorted(simplices)


def _generic_interior_point(c: Cone, normals: Iterable[IntVector]) -> IntVector:
    normals = list(normals)
    base = [sum(col) for col in zip(*c.rays)]
    for scale in range(1, 1000):
        for s in range(2, 50):
            pt = tuple(base[i] * scale * s**c.d + s**i for i in range(c.d))
            if in_relative_interior(c, pt) and all(dot(pt, n) != 0 for n in normals):
                return pt
    raise RuntimeError("no generic interior point found")


def triangulate(c: Cone) -> list[SimplicialConeData]:
    """Placing triangulation of ``c`` on its rays in lexicographic order.

    Pieces are tagged half-open so that they partition the lattice points of
    ``c``: a facet of a piece is dropped when a fixed generic interior point
    lies strictly on its outer side.
    """
    c.require_full_dimensional()
    d = c.d
    rays = sorted(c.rays)
    simplices = _placing_triangulation(rays, d)
    facet_normals = {}
    for s in simplices:
        for i in range(d):
            f = s[:i] + s[i + 1:]
            n = _normal_of([rays[j] for j in f], d)
            if dot(rays[s[i]], n) < 0:
                n = tuple(-x for x in n)
            facet_normals[(s, i)] = n
    ref = _generic_interior_point(c, facet_normals.values())
    out = []
    for s in simplices:
        opened = frozenset(i for i in range(d) if dot(ref, facet_normals[(s, i)]) < 0)
        out.append(SimplicialConeData(tuple(rays[j] for j in s), opened))
    return out


def _check_grading(c: Cone, q: Sequence[int]) -> None:
    if len(q) != c.d:
        raise DimensionError(f"grading {tuple(q)} is not of length {c.d}")
    bad = [r for r in c.rays if dot(r, q) <= 0]
    if bad:
        raise ConeError(f"grading {tuple(q)} is not positive on rays {bad}")


def points_up_to_grade(c: Cone, q: Sequence[int], max_grade: int, backend=None) -> list[IntVector]:
    """Lattice points of ``c`` with ``<w, q> <= max_grade``, lexicographic."""
    c.require_full_dimensional()
    _check_grading(c, q)
    if max_grade < 0:
        return []
    lo, hi = [0] * c.d, [0] * c.d
    for r in c.rays:
        gr = dot(r, q)
        for i, x in enumerate(r):
            lo[i] = min(lo[i], floor(Fraction(max_grade * x, gr)))
            hi[i] = max(hi[i], ceil(Fraction(max_grade * x, gr)))
    return kernels.cone_points_box(c.facet_normals, tuple(q), lo, hi, max_grade, backend=backend)


def enumerate_points_by_grade(
    c: Cone, q: Sequence[int], max_grade: int, backend=None
) -> dict[int, list[IntVector]]:
    """Lattice points of ``c`` grouped by ``<w, q>`` for grades ``0..max_grade``."""
    out: dict[int, list[IntVector]] = {g: [] for g in range(max_grade + 1)}
    for w in points_up_to_grade(c, q, max_grade, backend=backend):
        out[dot(w, q)].append(w)
    return out


def hilbert_basis(c: Cone) -> list[IntVector]:
    """Minimal generating set of the semigroup ``c`` intersected with the lattice.

    Irreducible elements are rays or lie in the half-open fundamental
    parallelepiped of some piece of a triangulation; candidates are filtered
    for minimality against each other.
    """
    c.require_full_dimensional()
    cands = set(c.rays)
    for s in triangulate(c):
        closed = SimplicialConeData(s.generators)
        cands.update(p for p in parallelepiped_points(closed) if any(p))
    cands = sorted(cands)
    basis = []
    for x in cands:
        reducible = any(
            h != x and contains(c, tuple(a - b for a, b in zip(x, h)))
            for h in cands
        )
        if not reducible:
            basis.append(x)
    return basis

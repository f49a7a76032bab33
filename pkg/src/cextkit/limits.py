"""Finite limits of diagrams of finite groups.

A limit is computed as the subgroup of the product of all object groups
made of arrow-compatible tuples.  Only a few objects are enumerated freely
(the ones no other object maps into); every other coordinate is determined
by a path from one of them, and the remaining arrows become equality
constraints for :func:`kernels.enumerate_constrained`.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from . import kernels
from .groups import FiniteGroup, Group, GroupHom, Subgroup, TupleGroup, cyclic

DEFAULT_BUDGET = 10 ** 7


@dataclass
class FinDiagram:
    """A finite shape: objects, named arrows ``name -> (src, tgt)`` and relations.

    A relation is a pair of paths with common endpoints; a path is a list of
    arrow names, applied left to right.
    """
    objects: list
    arrows: dict = field(default_factory=dict)
    relations: list = field(default_factory=list)

    def __post_init__(self):
        objs = set(self.objects)
        if len(objs) != len(self.objects):
            raise ValueError("duplicate object")
        for name, (s, t) in self.arrows.items():
            if s not in objs or t not in objs:
                raise ValueError(f"arrow {name!r} has an unknown endpoint")
        for p, q in self.relations:
            if self.path_ends(p) != self.path_ends(q):
                raise ValueError("relation between paths with different endpoints")

    def path_ends(self, path):
        if not path:
            raise ValueError("empty path")
        s = self.arrows[path[0]][0]
        cur = s
        for a in path:
            src, tgt = self.arrows[a]
            if src != cur:
                raise ValueError("path is not composable")
            cur = tgt
        return s, cur


class GrpFunctor:
    """A diagram of groups of a given shape."""

    def __init__(self, shape: FinDiagram, objects: dict, arrows: dict, check: bool = True):
        self.shape = shape
        self.obj = dict(objects)
        self.arr = dict(arrows)
        for o in shape.objects:
            if o not in self.obj:
                raise ValueError(f"object {o!r} has no group")
        for name, (s, t) in shape.arrows.items():
            h = self.arr[name]
            if h.domain is not self.obj[s] or h.codomain is not self.obj[t]:
                raise ValueError(f"arrow {name!r} does not match its endpoints")
        if check:
            for p, q in shape.relations:
                if not np.array_equal(self.path_images(p), self.path_images(q)):
                    raise ValueError(f"relation {p} = {q} fails")

    def path_images(self, path) -> np.ndarray:
        s, _ = self.shape.path_ends(path)
        im = np.arange(self.obj[s].order)
        for a in path:
            im = self.arr[a].images[im]
        return im


@dataclass
class LimitResult:
    apex: Group
    projections: dict

    def check_cone(self, F: GrpFunctor) -> bool:
        for name, (s, t) in F.shape.arrows.items():
            lhs = F.arr[name].images[self.projections[s].images]
            if not np.array_equal(lhs, self.projections[t].images):
                return False
        return True

    def mediate(self, cone: dict) -> GroupHom:
        """The unique map into the apex from a cone ``{object: hom}``."""
        apex = self.apex
        keys = list(self.projections)
        W = cone[keys[0]].domain
        if isinstance(apex, TupleGroup):
            rows = np.stack([cone[k].images for k in keys], axis=1)
            return GroupHom(W, apex, apex.index_of(rows), check=False)
        raise TypeError("mediating maps need a tuple-group apex")


def _solve(sizes, maps, constraints, budget):
    return kernels.enumerate_constrained(sizes, maps, constraints, budget)


def limit(F: GrpFunctor, budget: int = DEFAULT_BUDGET) -> LimitResult:
    """Limit of F as a subgroup of the product of its objects."""
    shape = F.shape
    objs = list(shape.objects)
    if not objs:
        T = cyclic(1, name="1")
        return LimitResult(T, {})
    pos = {o: k for k, o in enumerate(objs)}
    incoming = {o: [] for o in objs}
    outgoing = {o: [] for o in objs}
    for name, (s, t) in shape.arrows.items():
        outgoing[s].append(name)
        if s != t:
            incoming[t].append(name)
    # value[o] = (variable index, images of the composite from that variable)
    value: dict = {}
    variables: list = []
    tree = set()

    def spread(start):
        q = deque([start])
        while q:
            o = q.popleft()
            v, comp = value[o]
            for name in outgoing[o]:
                t = shape.arrows[name][1]
                if t not in value:
                    value[t] = (v, F.arr[name].images[comp])
                    tree.add(name)
                    q.append(t)

    for o in objs:
        if not incoming[o] and o not in value:
            value[o] = (len(variables), np.arange(F.obj[o].order))
            variables.append(o)
            spread(o)
    for o in objs:
        if o not in value:
            value[o] = (len(variables), np.arange(F.obj[o].order))
            variables.append(o)
            spread(o)

    maps, cons = [], []
    for name, (s, t) in shape.arrows.items():
        if name in tree:
            continue
        vs, cs = value[s]
        vt, ct = value[t]
        maps.append(F.arr[name].images[cs])
        maps.append(ct)
        cons.append((vs, vt, len(maps) - 2, len(maps) - 1))
    sizes = [F.obj[o].order for o in variables]
    sol = _solve(sizes, maps, cons, budget)
    rows = np.empty((len(sol), len(objs)), dtype=np.int64)
    for o in objs:
        v, comp = value[o]
        rows[:, pos[o]] = comp[sol[:, v]]
    apex = TupleGroup([F.obj[o] for o in objs], rows, name="lim")
    proj = {o: apex.coordinate(pos[o]) for o in objs}
    return LimitResult(apex, proj)


def pullback(f: GroupHom, g: GroupHom, budget: int = DEFAULT_BUDGET) -> LimitResult:
    """{(x, y) : f(x) = g(y)} with projections keyed 0 and 1."""
    if f.codomain is not g.codomain and not (
            isinstance(f.codomain, FiniteGroup) and f.codomain.same_table(g.codomain)):
        raise ValueError("pullback of maps with different codomains")
    X, Y = f.domain, g.domain
    sol = _solve([X.order, Y.order], [f.images, g.images], [(0, 1, 0, 1)], budget)
    apex = TupleGroup([X, Y], sol, name=f"{X.name}×_{f.codomain.name}{Y.name}")
    return LimitResult(apex, {0: apex.coordinate(0), 1: apex.coordinate(1)})


def simplicial_kernel(maps: Sequence[GroupHom], budget: int = DEFAULT_BUDGET):
    """Tuples (x_0..x_n) with f_i(x_j) = f_{j-1}(x_i) for i < j.

    Returns the group and its coordinate projections k_0..k_n.
    """
    maps = list(maps)
    if not maps:
        raise ValueError("need at least one map")
    X, Y = maps[0].domain, maps[0].codomain
    for h in maps:
        if h.domain is not X or h.codomain is not Y:
            raise ValueError("maps must share domain and codomain")
    n = len(maps)
    cons = [(j, i, i, j - 1) for j in range(n + 1) for i in range(j)]
    sol = _solve([X.order] * (n + 1), [h.images for h in maps], cons, budget)
    K = TupleGroup([X] * (n + 1), sol, name=f"Δ({X.name})")
    return K, [K.coordinate(i) for i in range(n + 1)]


class LiftFailure(RuntimeError):
    """A prefix generator has no compatible next coordinate."""


def constrained_generators(groups: Sequence[Group], maps, constraints) -> np.ndarray:
    """Generating rows for the subgroup of ∏ groups cut out by the constraints.

    Works one column at a time: generators of the projection onto the
    first c columns are lifted to column c, and the kernel of the
    projection (identity prefix) contributes its own generators.  The
    result is exact whenever every lift exists, which is checked; for
    simplicial kernels of groups this is the Kan property.
    Constraints are (a, b, ma, mb): maps[ma][x_a] == maps[mb][x_b].
    """
    m = len(groups)
    maps = [np.asarray(h, dtype=np.int64) for h in maps]
    back = [[] for _ in range(m)]
    for a, b, ma, mb in constraints:
        if a > b:
            a, b, ma, mb = b, a, mb, ma
        back[b].append((a, ma, mb))
    gens = np.zeros((0, m), dtype=np.int64)
    for c in range(m):
        G = groups[c]
        els = G.elements

        def fits(prefix):
            ok = np.ones(G.order, dtype=bool)
            for a, ma, mb in back[c]:
                ok &= maps[mb][els] == maps[ma][prefix[a]]
            return ok

        for r in gens:
            cand = np.flatnonzero(fits(r))
            if cand.size == 0:
                raise LiftFailure(f"column {c}")
            r[c] = cand[0]
        ker = np.flatnonzero(fits(np.zeros(m, dtype=np.int64)))
        if ker.size > 1:
            H, inc = Subgroup(G, ker).as_group()
            new = np.zeros((len(H.generators), m), dtype=np.int64)
            new[:, c] = inc.images[list(H.generators)]
            gens = np.concatenate([gens, new])
    return gens


def hom_to_rows(domain: Group, cod: TupleGroup, rows) -> GroupHom:
    return GroupHom(domain, cod, cod.index_of(np.asarray(rows)), check=False)


# ------------------------------------------------------ cube-shaped limits

def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def punctured_limit(F, I: int, budget: int = DEFAULT_BUDGET):
    """lim over J ⊊ I of F_J, coordinatised by the co-atoms I∖{i}.

    Returns (group, co-atom directions).  Entry c of a row is the value at
    I∖{dirs[c]}.
    """
    dirs = _bits(I)
    if not dirs:
        raise ValueError("the empty subset has no punctured limit")
    sizes = [F.objects[I & ~(1 << i)].order for i in dirs]
    maps, cons = [], []
    for b, j in enumerate(dirs):
        for a, i in enumerate(dirs[:b]):
            # y_a at I∖{i}, y_b at I∖{j}; compare in I∖{i,j}
            maps.append(F.map(I & ~(1 << i), j).images)
            maps.append(F.map(I & ~(1 << j), i).images)
            cons.append((a, b, len(maps) - 2, len(maps) - 1))
    sol = _solve(sizes, maps, cons, budget)
    facs = [F.objects[I & ~(1 << i)] for i in dirs]
    return TupleGroup(facs, sol, name=f"L{I:b}"), dirs


def comparison_rows(F, I: int) -> np.ndarray:
    """Rows (f_i(x))_{i∈I} for every x in F_I."""
    dirs = _bits(I)
    return np.stack([F.map(I, i).images for i in dirs], axis=1)


def punctured_cube_functor(F, I: int | None = None) -> GrpFunctor:
    """The restriction of F to proper subsets of I, as a general diagram."""
    I = F.top if I is None else I
    subs = [J for J in range(F.top + 1) if J & ~I == 0 and J != I]
    arrows, homs = {}, {}
    for J in subs:
        for i in _bits(J):
            name = (J, i)
            arrows[name] = (J, J & ~(1 << i))
            homs[name] = F.map(J, i)
    rels = []
    for J in subs:
        bs = _bits(J)
        for a in bs:
            for b in bs:
                if a < b:
                    rels.append(([(J, a), (J & ~(1 << a), b)], [(J, b), (J & ~(1 << b), a)]))
    shape = FinDiagram(subs, arrows, rels)
    return GrpFunctor(shape, {J: F.objects[J] for J in subs}, homs)


def comparison_L(F, method: str = "pullbacks", budget: int = DEFAULT_BUDGET):
    """(L F, l_F) with L F the limit of F over the proper subsets of n.

    ``method='pullbacks'`` builds L F by iterated pullbacks, folding the last
    two directions into one at each step; ``method='direct'`` enumerates
    co-atom tuples.  Both return L F coordinatised by co-atoms, so results
    of the two methods are directly comparable.
    """
    n = F.n
    if n < 1:
        raise ValueError("need n >= 1")
    if method == "direct":
        L, dirs = punctured_limit(F, F.top, budget)
        l = hom_to_rows(F.objects[F.top], L, comparison_rows(F, F.top))
        return LimitResult(L, {i: L.coordinate(c) for c, i in enumerate(dirs)}), l
    if method != "pullbacks":
        raise ValueError(f"unknown method {method!r}")
    Lg, projs = _iterated(F, budget)
    # re-coordinatise by co-atoms
    rows = np.stack([p.images for p in projs], axis=1)
    coat = TupleGroup([F.objects[F.top & ~(1 << i)] for i in range(n)], rows, name="L")
    iso = GroupHom(Lg, coat, coat.index_of(rows), check=False)
    if len(np.unique(iso.images)) != Lg.order:
        raise AssertionError("iterated pullback is not a set of co-atom tuples")
    l = hom_to_rows(F.objects[F.top], coat, comparison_rows(F, F.top))
    return LimitResult(coat, {i: coat.coordinate(i) for i in range(n)}), l


def _iterated(F, budget):
    """L F and its maps to the co-atoms, by induction on n."""
    from .cubes import CubicExtensionDiagram

    n = F.n
    if n == 1:
        Z = F.objects[0]
        return Z, [GroupHom(Z, Z, np.arange(Z.order), check=False)]
    a, b = n - 2, n - 1
    objs, maps = {}, {}
    low = (1 << a) - 1
    for J in range(low + 1):
        objs[J | (1 << a)] = F.objects[J | (1 << a) | (1 << b)]
        P = pullback(F.map(J | (1 << a), a), F.map(J | (1 << b), b), budget).apex
        objs[J] = P
    for J in range(low + 1):
        top = J | (1 << a)
        X = objs[top]
        src = J | (1 << a) | (1 << b)
        # direction a of G: x -> (f_b x, f_a x)
        rows = np.stack([F.map(src, b).images, F.map(src, a).images], axis=1)
        maps[(top, a)] = hom_to_rows(X, objs[J], rows)
        for i in _bits(J):
            maps[(top, i)] = F.map(src, i)
            P, Q = objs[J], objs[J & ~(1 << i)]
            r = P.rows
            rows = np.stack([F.map(J | (1 << a), i).images[r[:, 0]],
                             F.map(J | (1 << b), i).images[r[:, 1]]], axis=1)
            maps[(J, i)] = hom_to_rows(P, Q, rows)
    G = CubicExtensionDiagram(n - 1, objs, maps, check=False)
    LG, projs = _iterated(G, budget)
    out = list(projs[:a])
    P = G.objects[low]
    second = P.coordinate(1) if isinstance(P, TupleGroup) else None
    first = P.coordinate(0) if isinstance(P, TupleGroup) else None
    out.append(second @ projs[a])  # co-atom n∖{a} sits in the second factor
    out.append(first @ projs[a])
    return LG, out


def pointwise_ran(F):
    """The truncated simplicial group s_n F for n ≤ 2.

    For n = 1 this is F itself.  For n = 2 the top level is the set of
    triples (x00, x01, x11) in X = F_top with (x00, x01) in R(f_1) and
    (x01, x11) in R(f_0); its faces are d_0 = x11 and d_1 = x00 and its
    degeneracy is the diagonal.
    """
    from .simplicial import TruncatedSimplicialGroup

    if F.n == 1:
        X, Z = F.objects[1], F.objects[0]
        return TruncatedSimplicialGroup([Z, X], {(0, 0): F.map(1, 0)}, {})
    if F.n != 2:
        raise ValueError("pointwise Kan extension is implemented for n ≤ 2 only")
    X, Z = F.objects[3], F.objects[0]
    f0, f1 = F.map(3, 0), F.map(3, 1)
    sol = _solve([X.order] * 3, [f1.images, f0.images], [(0, 1, 0, 0), (1, 2, 1, 1)],
                 DEFAULT_BUDGET)
    T1 = TupleGroup([X, X, X], sol, name="R×R")
    to_z = f0.images
    to_z = F.map(2, 1).images[to_z]
    d = {
        (0, 0): GroupHom(X, Z, to_z, check=False),
        (1, 0): T1.coordinate(2),
        (1, 1): T1.coordinate(0),
    }
    diag = np.stack([X.elements] * 3, axis=1)
    s = {(0, 0): hom_to_rows(X, T1, diag)}
    return TruncatedSimplicialGroup([Z, X, T1], d, s)


def ran_counit(F, T) -> dict:
    """Components u_I of the counit arr_2 s_2 F -> F, keyed by subset mask."""
    T1 = T.levels[2]
    return {
        3: T1.coordinate(1),
        1: F.map(3, 1),
        2: F.map(3, 0),
        0: GroupHom(F.objects[0], F.objects[0], np.arange(F.objects[0].order), check=False),
    }


def counit_is_natural(F, T=None) -> bool:
    """The counit components commute with the generating maps of both cubes."""
    T = T or pointwise_ran(F)
    G = T.underlying_cube()
    u = ran_counit(F, T)
    for (J, i), g in G.maps.items():
        lhs = F.map(J, i).images[u[J].images]
        rhs = u[J & ~(1 << i)].images[g.images]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def counit_square_is_pullback(F, budget: int = DEFAULT_BUDGET) -> bool:
    """Is G_n -> L G ×_{L F} F_n bijective, for G the cube of s_n F?

    G_n maps to the pullback by (l_G, u_n); the square is a pullback
    exactly when this map is a bijection.
    """
    if F.n == 1:
        return True
    T = pointwise_ran(F)
    G = T.underlying_cube()
    u = ran_counit(F, T)
    LG, lG = comparison_L(G, method="direct", budget=budget)
    LF, lF = comparison_L(F, method="direct", budget=budget)
    coat = [G.top & ~(1 << i) for i in range(G.n)]
    rows = np.stack([u[J].images[LG.apex.rows[:, c]] for c, J in enumerate(coat)], axis=1)
    Lu = hom_to_rows(LG.apex, LF.apex, rows)
    P = pullback(Lu, lF, budget).apex
    pairs = np.stack([lG.images, u[G.top].images], axis=1)
    idx = np.atleast_1d(P.index_of(pairs, strict=False))
    return bool((idx >= 0).all() and len(np.unique(idx)) == P.order == G.top_object.order)

"""n-fold arrows of groups and the extension calculus on them.

Subsets of n = {0, ..., n-1} are bitmasks.  A diagram stores a group F_I for
every mask I and, for i in I, the generating map f_i: F_I -> F_{I∖{i}}.
The top object is F_n (mask 2^n - 1) and the base is F_∅ = Z.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import NotAnExtension, PreconditionError
from .groups import (FiniteGroup, Group, GroupHom, Subgroup, TupleGroup, commutator_subgroup,
                     commuting_witness, full_subgroup, induced_on_quotient, join, quotient,
                     trivial_subgroup)
from .limits import (DEFAULT_BUDGET, GrpFunctor, FinDiagram, _bits, comparison_L,
                     comparison_rows, hom_to_rows, punctured_limit)


def popcount(m: int) -> int:
    return bin(m).count("1")


class CubicExtensionDiagram:
    """A functor (2^n)^op -> Grp given by its generating maps."""

    def __init__(self, n: int, objects: dict, maps: dict, check: bool = True, name: str = ""):
        self.n = int(n)
        self.top = (1 << self.n) - 1
        self.objects = {int(k): v for k, v in objects.items()}
        self.maps = {(int(J), int(i)): h for (J, i), h in maps.items()}
        self.name = name
        for J in range(self.top + 1):
            if J not in self.objects:
                raise ValueError(f"missing object at {J:#b}")
            for i in _bits(J):
                h = self.maps.get((J, i))
                if h is None:
                    raise ValueError(f"missing map f_{i} at {J:#b}")
                if h.domain is not self.objects[J] or h.codomain is not self.objects[J & ~(1 << i)]:
                    raise ValueError(f"map f_{i} at {J:#b} has wrong endpoints")
        if check:
            w = self.commutation_witness()
            if w is not None:
                raise ValueError(f"diagram does not commute: {w}")

    def map(self, J: int, i: int) -> GroupHom:
        return self.maps[(J, i)]

    def composite(self, J: int, K: int) -> GroupHom:
        """f^J_K : F_J -> F_K for K ⊆ J."""
        if K & ~J:
            raise ValueError("not a subset")
        im = np.arange(self.objects[J].order)
        cur = J
        for i in _bits(J & ~K):
            im = self.maps[(cur, i)].images[im]
            cur &= ~(1 << i)
        return GroupHom(self.objects[J], self.objects[K], im, check=False)

    def commutation_witness(self):
        for J in range(self.top + 1):
            for i, j in itertools.combinations(_bits(J), 2):
                p = self.maps[(J & ~(1 << i), j)].images[self.maps[(J, i)].images]
                q = self.maps[(J & ~(1 << j), i)].images[self.maps[(J, j)].images]
                bad = np.flatnonzero(p != q)
                if bad.size:
                    return (J, i, j, int(bad[0]))
        return None

    @property
    def top_object(self) -> Group:
        return self.objects[self.top]

    @property
    def base(self) -> Group:
        return self.objects[0]

    def top_map(self, i: int) -> GroupHom:
        return self.maps[(self.top, i)]

    def functor(self) -> GrpFunctor:
        subs = list(range(self.top + 1))
        arrows = {(J, i): (J, J & ~(1 << i)) for J in subs for i in _bits(J)}
        shape = FinDiagram(subs, arrows, [])
        return GrpFunctor(shape, self.objects, dict(self.maps), check=False)

    def replace_top(self, X: Group, top_maps: dict, name: str = "") -> "CubicExtensionDiagram":
        objs = dict(self.objects)
        objs[self.top] = X
        maps = {k: v for k, v in self.maps.items() if k[0] != self.top}
        for i in range(self.n):
            maps[(self.top, i)] = top_maps[i]
        return CubicExtensionDiagram(self.n, objs, maps, name=name or self.name)

    def __repr__(self):
        return f"<CubicExtensionDiagram n={self.n} |F_n|={self.top_object.order} {self.name}>"


# ------------------------------------------------------------- builders

def arrow(f: GroupHom, name: str = "") -> CubicExtensionDiagram:
    """The 1-fold arrow f: X -> Z."""
    return CubicExtensionDiagram(1, {0: f.codomain, 1: f.domain}, {(1, 0): f}, name=name)


def cube_of_quotients(X: FiniteGroup, normals, name: str = "") -> CubicExtensionDiagram:
    """F_I = X / (product of K_i over i ∉ I), with the canonical maps.

    ``normals[i]`` is the kernel of the top map f_i.
    """
    n = len(normals)
    top = (1 << n) - 1
    objs, qs = {}, {}
    for I in range(top + 1):
        missing = [normals[i] for i in range(n) if not I >> i & 1]
        N = join(X, missing) if missing else trivial_subgroup(X)
        if I == top:
            objs[I] = X
            qs[I] = GroupHom(X, X, np.arange(X.order), check=False)
        else:
            N = Subgroup(X, N.elements, normal=True)
            Q, q = quotient(X, N, name=f"{X.name}/N{I:b}")
            objs[I], qs[I] = Q, q
    maps = {}
    for J in range(top + 1):
        for i in _bits(J):
            K = J & ~(1 << i)
            maps[(J, i)] = induced_on_quotient(qs[K], qs[J])
            maps[(J, i)] = GroupHom(objs[J], objs[K], maps[(J, i)].images, check=False)
    return CubicExtensionDiagram(n, objs, maps, name=name)


def identity_cube(G: Group, n: int) -> CubicExtensionDiagram:
    top = (1 << n) - 1
    objs = {I: G for I in range(top + 1)}
    idh = GroupHom(G, G, np.arange(G.order), check=False)
    maps = {(J, i): idh for J in range(top + 1) for i in _bits(J)}
    return CubicExtensionDiagram(n, objs, maps, name=f"id^{n}({G.name})")


# -------------------------------------------------------- extension test

@dataclass
class ExtensionReport:
    ok: bool
    subset: int | None = None
    missed: tuple | None = None

    def __bool__(self):
        return self.ok


def is_extension(F: CubicExtensionDiagram, budget: int = DEFAULT_BUDGET) -> ExtensionReport:
    """Every comparison F_I -> lim_{J⊊I} F_J surjective, for I ≠ ∅.

    Subsets are scanned by size, then numerically, so the witness is
    canonical.
    """
    for I in sorted(range(1, F.top + 1), key=lambda m: (popcount(m), m)):
        L, _ = punctured_limit(F, I, budget)
        im = np.unique(L.encode(comparison_rows(F, I)))
        if len(im) < L.order:
            hit = np.isin(L.codes, im)
            missed = L.rows[np.flatnonzero(~hit)[0]]
            return ExtensionReport(False, I, tuple(int(v) for v in missed))
    return ExtensionReport(True)


def require_extension(F: CubicExtensionDiagram):
    rep = is_extension(F)
    if not rep:
        raise NotAnExtension(f"comparison at {rep.subset:#b} misses {rep.missed}",
                             subset=rep.subset, witness=rep.missed)


# --------------------------------------------------------------- kernels

def top_kernels(F: CubicExtensionDiagram) -> list[Subgroup]:
    return [F.top_map(i).kernel() for i in range(F.n)]


def kernel_meet(F: CubicExtensionDiagram, I: int) -> Subgroup:
    """∩_{i∈I} K(f_i) in F_n; the empty meet is F_n itself."""
    X = F.top_object
    ks = top_kernels(F)
    mask = np.ones(X.order, dtype=bool)
    for i in _bits(I):
        mask &= ks[i].mask
    return Subgroup(X, np.flatnonzero(mask), normal=True)


@dataclass
class DirectionRecord:
    subgroup: Subgroup
    abelian: bool
    group: Group
    embedding: GroupHom
    agrees_with_l: bool

    @property
    def order(self) -> int:
        return self.subgroup.order


def direction(F: CubicExtensionDiagram) -> DirectionRecord:
    """A = ∩ K(f_i), checked against the kernel of l_F."""
    A = kernel_meet(F, F.top)
    if F.n == 0:
        agree = True
    else:
        _, l = comparison_L(F, method="direct")
        agree = np.array_equal(l.kernel().elements, A.elements)
    G, inc = A.as_group(name="A")
    w = commuting_witness(F.top_object, A, A)
    return DirectionRecord(A, w is None, G, inc, agree)


# ---------------------------------------------------------- centralisation

def commutator_pairs(F: CubicExtensionDiagram):
    """(I, ∩_{i∈I}K_i, ∩_{i∉I}K_i) for every I ⊆ n."""
    for I in range(F.top + 1):
        yield I, kernel_meet(F, I), kernel_meet(F, F.top & ~I)


def centralisation_obstruction(F: CubicExtensionDiagram) -> Subgroup:
    """L_n[F]: the join of [∩_{i∈I}K_i, ∩_{i∉I}K_i] over all I ⊆ n."""
    X = F.top_object
    parts = []
    seen = set()
    for I, K, L in commutator_pairs(F):
        key = (K.elements.tobytes(), L.elements.tobytes())
        if key in seen or (L.elements.tobytes(), K.elements.tobytes()) in seen:
            continue
        seen.add(key)
        parts.append(commutator_subgroup(X, K, L))
    return Subgroup(X, join(X, parts).elements, normal=True)


def quotient_top(F: CubicExtensionDiagram, N: Subgroup, name: str = "") -> CubicExtensionDiagram:
    """F with F_n replaced by F_n/N; N must lie in every top kernel."""
    X = F.top_object
    Q, q = quotient(X, N, name=f"{X.name}/N")
    maps = {}
    for i in range(F.n):
        maps[i] = induced_on_quotient(F.top_map(i), q)
        maps[i] = GroupHom(Q, F.objects[F.top & ~(1 << i)], maps[i].images, check=False)
    return F.replace_top(Q, maps, name=name)


def centralise(F: CubicExtensionDiagram) -> CubicExtensionDiagram:
    return quotient_top(F, centralisation_obstruction(F), name=f"centr({F.name})")


# ---------------------------------------------------------- product over Z

def _same_group(G: Group, H: Group) -> bool:
    return G is H or (isinstance(G, FiniteGroup) and isinstance(H, FiniteGroup)
                      and G.same_table(H))


def product_over_Z(F: CubicExtensionDiagram, G: CubicExtensionDiagram,
                   budget: int = DEFAULT_BUDGET) -> CubicExtensionDiagram:
    """(F×G)_I = F_I ×_Z G_I, with Z itself kept at the base."""
    from . import kernels

    if F.n != G.n:
        raise ValueError("degrees differ")
    if not _same_group(F.base, G.base):
        raise ValueError("diagrams over different bases")
    Z = F.base
    objs = {0: Z}
    for I in range(1, F.top + 1):
        fz, gz = F.composite(I, 0), G.composite(I, 0)
        rows = kernels.enumerate_constrained(
            [F.objects[I].order, G.objects[I].order], [fz.images, gz.images],
            [(0, 1, 0, 1)], budget)
        objs[I] = TupleGroup([F.objects[I], G.objects[I]], rows,
                             name=f"{F.objects[I].name}×_Z{G.objects[I].name}")
    maps = {}
    for J in range(1, F.top + 1):
        P = objs[J]
        for i in _bits(J):
            K = J & ~(1 << i)
            if K == 0:
                maps[(J, i)] = GroupHom(P, Z, F.map(J, i).images[P.rows[:, 0]], check=False)
            else:
                rows = np.stack([F.map(J, i).images[P.rows[:, 0]],
                                 G.map(J, i).images[P.rows[:, 1]]], axis=1)
                maps[(J, i)] = hom_to_rows(P, objs[K], rows)
    return CubicExtensionDiagram(F.n, objs, maps, name=f"{F.name}×_Z{G.name}")


# ------------------------------------------------------------ kernel faces

def kernel_face(F: CubicExtensionDiagram, i: int) -> CubicExtensionDiagram:
    """The (n-1)-cube of kernels of F read as an arrow in direction i.

    Directions other than i keep their order and are renumbered 0..n-2.
    """
    if not 0 <= i < F.n:
        raise ValueError("direction out of range")
    others = [j for j in range(F.n) if j != i]

    def lift(m):
        return sum(1 << others[k] for k in range(len(others)) if m >> k & 1) | (1 << i)

    objs, incs = {}, {}
    for m in range(1 << (F.n - 1)):
        J = lift(m)
        K = F.map(J, i).kernel()
        Kg, inc = K.as_group(name=f"K{J:b}")
        objs[m], incs[m] = Kg, inc
    maps = {}
    for m in range(1 << (F.n - 1)):
        J = lift(m)
        for k in _bits(m):
            j = others[k]
            img = F.map(J, j).images[incs[m].images]
            tgt = m & ~(1 << k)
            pos = np.full(F.objects[J & ~(1 << j)].order, -1, dtype=np.int64)
            pos[incs[tgt].images] = np.arange(objs[tgt].order)
            maps[(m, k)] = GroupHom(objs[m], objs[tgt], pos[img], check=False)
    return CubicExtensionDiagram(F.n - 1, objs, maps, name=f"ker_{i}({F.name})")


# ----------------------------------------------------------- pushforward

def pushforward_cube(F: CubicExtensionDiagram, a: GroupHom,
                     A: DirectionRecord | None = None) -> CubicExtensionDiagram:
    """Push the direction of F forward along a: A -> B (B abelian).

    The top becomes (F_n × B)/{(k(x), a(x)^-1)} and every top map kills B.
    """
    from .groups import direct_product

    A = A or direction(F)
    if a.domain.order != A.order:
        raise ValueError("a must start at the direction group")
    X, B = F.top_object, a.codomain
    if not isinstance(X, FiniteGroup):
        X = X.to_finite_group()
        F = _with_finite_top(F, X)
        A = direction(F)
    P = direct_product(X, B)
    k = A.embedding.images
    # the element (k(x), a(x)^-1) sits at k(x)·|B| + inv(a(x))
    gens = k * B.order + B.inverse[a.images]
    N = Subgroup(P, np.unique(gens), normal=True)
    Q, q = quotient(P, N, name=f"{X.name}⊔{B.name}")
    maps = {}
    for i in range(F.n):
        fi = F.top_map(i)
        vals = fi.images[np.arange(P.order) // B.order]
        h = induced_on_quotient(GroupHom(P, fi.codomain, vals, check=False), q)
        maps[i] = GroupHom(Q, fi.codomain, h.images, check=False)
    out = F.replace_top(Q, maps, name=f"{F.name}_*")
    # B sits in the new top as b -> [(1, b)]
    out.pushed_embedding = GroupHom(B, Q, q.images[np.arange(B.order)], check=False)
    return out


def _with_finite_top(F: CubicExtensionDiagram, X: FiniteGroup) -> CubicExtensionDiagram:
    maps = {i: GroupHom(X, F.top_map(i).codomain, F.top_map(i).images, check=False)
            for i in range(F.n)}
    return F.replace_top(X, maps)


def require_degree(F: CubicExtensionDiagram, lo: int, hi: int):
    if not lo <= F.n <= hi:
        raise PreconditionError(f"degree {F.n} outside {lo}..{hi}")

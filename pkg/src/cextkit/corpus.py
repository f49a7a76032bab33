"""Named small groups and generated corpora of extensions and torsors."""
from __future__ import annotations

import itertools
import re

import numpy as np

from .cubes import CubicExtensionDiagram, arrow, cube_of_quotients
from .groups import (FiniteGroup, Group, GroupHom, Subgroup, abelian_group, all_homomorphisms,
                     alternating, automorphisms, closure, cyclic, dicyclic, dihedral,
                     direct_product, find_isomorphism, from_permutations, invariant_factors_of_abelian,
                     normal_subgroups, quaternion, quotient, semidirect_product, symmetric)
from .simplicial import TruncatedSimplicialGroup

_NONABELIAN = {
    "S3": lambda: symmetric(3),
    "D4": lambda: dihedral(4),
    "Q8": quaternion,
    "D5": lambda: dihedral(5),
    "D6": lambda: dihedral(6),
    "Dic3": lambda: dicyclic(3),
    "A4": lambda: alternating(4),
    "D7": lambda: dihedral(7),
    "D8": lambda: dihedral(8),
    "Q16": lambda: dicyclic(4, name="Q16"),
}

_CYCLIC_RE = re.compile(r"^C(\d+)$")


def named_group(name: str) -> FiniteGroup:
    """Parse names like C4, C2×C2 (or C2xC2), S3, D4, Q8."""
    name = name.strip()
    parts = re.split(r"[×x*]", name)
    if len(parts) > 1:
        orders = []
        for p in parts:
            m = _CYCLIC_RE.match(p.strip())
            if not m:
                raise ValueError(f"unknown group name {name!r}")
            orders.append(int(m.group(1)))
        G = abelian_group([d for d in orders if d > 1])
        G.name = "×".join(f"C{d}" for d in orders)
        return G
    m = _CYCLIC_RE.match(name)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise ValueError("cyclic order must be positive")
        return cyclic(n)
    if name in _NONABELIAN:
        G = _NONABELIAN[name]()
        G.name = name
        return G
    raise ValueError(f"unknown group name {name!r}")


def group_name(G: Group) -> str:
    """A structural name: invariant factors when abelian, else a catalogue match."""
    if G.order == 1:
        return "C1"
    if G.is_abelian():
        return "×".join(f"C{d}" for d in invariant_factors_of_abelian(G))
    for nm, make in _NONABELIAN.items():
        H = make()
        if H.order == G.order and find_isomorphism(G, H) is not None:
            return nm
    return f"G{G.order}"


def small_groups(max_order: int = 16) -> list[FiniteGroup]:
    """A fixed catalogue covering every group of order ≤ 8 and a spread up to 16."""
    names = ["C1", "C2", "C3", "C4", "C2×C2", "C5", "C6", "S3", "C7", "C8", "C2×C4",
             "C2×C2×C2", "D4", "Q8", "C9", "C3×C3", "C10", "D5", "C12", "C2×C6", "D6",
             "Dic3", "A4", "C14", "D7", "C16", "C4×C4", "C2×C8", "D8", "Q16"]
    out = []
    for nm in names:
        G = named_group(nm)
        if G.order <= max_order:
            out.append(G)
    return out


# ------------------------------------------------------------ extensions

def extensions_n1(max_order: int = 16) -> list[CubicExtensionDiagram]:
    out = []
    for X in small_groups(max_order):
        for N in normal_subgroups(X):
            Q, q = quotient(X, N)
            out.append(arrow(q, name=f"{X.name}/{N.order}"))
    return out


def extensions_n2(max_order: int = 8, limit_per_group: int | None = None) -> list[CubicExtensionDiagram]:
    out = []
    for X in small_groups(max_order):
        ns = normal_subgroups(X)
        pairs = list(itertools.product(ns, ns))
        if limit_per_group is not None:
            pairs = pairs[:limit_per_group]
        for K0, K1 in pairs:
            out.append(cube_of_quotients(X, [K0, K1], name=f"{X.name}[{K0.order},{K1.order}]"))
    return out


def extensions_n3(max_order: int = 8, limit_per_group: int = 12) -> list[CubicExtensionDiagram]:
    out = []
    for X in small_groups(max_order):
        ns = normal_subgroups(X)
        trip = list(itertools.product(ns, repeat=3))
        step = max(1, len(trip) // limit_per_group)
        for Ks in trip[::step][:limit_per_group]:
            out.append(cube_of_quotients(X, list(Ks), name=f"{X.name}{[K.order for K in Ks]}"))
    return out


# ------------------------------------------------- pre-crossed modules

def _aut_actions(K: FiniteGroup, X: FiniteGroup):
    """All actions of X on K, as arrays action[x] = automorphism images."""
    auts = automorphisms(K)
    perms = [tuple(int(v) for v in a.images) for a in auts]
    A, plist = from_permutations(perms, name="Aut")
    acts = []
    for h in all_homomorphisms(X, A):
        # from_permutations composes left to right, so invert to get x·y acting as x∘y
        act = [plist[int(A.inverse[h.images[x]])] for x in range(X.order)]
        assert all(act[int(X.mul(x, y))] == tuple(act[x][v] for v in act[y])
                   for x in range(X.order) for y in range(X.order))
        acts.append(act)
    return acts


def precrossed_module(K: FiniteGroup, X: FiniteGroup, d: GroupHom, action,
                      name: str = "") -> TruncatedSimplicialGroup:
    """The 1-truncation Z ← X ⇇ K⋊X of a pre-crossed module ∂: K -> X.

    ∂_1(k,x) = x, ∂_0(k,x) = ∂(k)x, σ_0(x) = (1,x), and Z = X/∂K.
    """
    P = semidirect_product(K, X, action)
    nk = K.order
    el = np.arange(P.order)
    k, x = el % nk, el // nk
    img = Subgroup(X, closure(X, d.images))
    Z, q = quotient(X, img)
    d0 = GroupHom(P, X, np.asarray(X.mul(d.images[k], x)), check=False)
    d1 = GroupHom(P, X, x, check=False)
    s0 = GroupHom(X, P, X.elements * nk, check=False)
    return TruncatedSimplicialGroup([Z, X, P], {(0, 0): q, (1, 0): d0, (1, 1): d1},
                                    {(0, 0): s0}, name=name or f"{K.name}→{X.name}")


def precrossed_modules(max_product: int = 16, limit: int | None = None):
    """Equivariant ∂: K -> X with |K|·|X| ≤ max_product."""
    groups = small_groups(max_product)
    out = []
    for K in groups:
        if K.order == 1:
            continue
        for X in groups:
            if K.order * X.order > max_product:
                continue
            acts = _aut_actions(K, X)
            homs = all_homomorphisms(K, X)
            for ai, act in enumerate(acts):
                A = np.asarray(act)
                for di, d in enumerate(homs):
                    im = d.images
                    lhs = im[A]                       # ∂(x·k) for all x, k
                    rhs = np.asarray(X.mul(X.mul(X.elements[:, None], im[None, :]),
                                           X.inv(X.elements)[:, None]))
                    if not np.array_equal(lhs, rhs):
                        continue
                    out.append(precrossed_module(K, X, d, act,
                                                 name=f"{K.name}→{X.name}#{ai}.{di}"))
                    if limit is not None and len(out) >= limit:
                        return out
    return out


def quotient_truncation(X: FiniteGroup, N: Subgroup) -> TruncatedSimplicialGroup:
    Q, q = quotient(X, N)
    return TruncatedSimplicialGroup([Q, X], {(0, 0): q}, {}, name=f"{X.name}/{N.order}")


def torsor_corpus(max_order: int = 16, max_product: int = 16):
    """0-truncations X -> X/N and 1-truncations from pre-crossed modules."""
    out = []
    for X in small_groups(max_order):
        for N in normal_subgroups(X):
            out.append(quotient_truncation(X, N))
    out.extend(precrossed_modules(max_product))
    return out


def non_resolution_example() -> TruncatedSimplicialGroup:
    """C2 ⇇ C2 over the trivial group: the diagonal misses (0, 1)."""
    C2 = cyclic(2)
    C1 = cyclic(1)
    ident = GroupHom(C2, C2, [0, 1], check=False)
    to1 = GroupHom(C2, C1, [0, 0], check=False)
    return TruncatedSimplicialGroup([C1, C2, C2], {(0, 0): to1, (1, 0): ident, (1, 1): ident},
                                    {(0, 0): ident}, name="non-resolution")

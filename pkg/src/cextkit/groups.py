"""Finite groups as multiplication tables, with subgroups and homomorphisms.

Elements of every group are the integers ``0 .. order-1`` and the identity is
always ``0``.  Two concrete representations share one interface:

* :class:`FiniteGroup` stores the full Cayley table.
* :class:`TupleGroup` is a subgroup of a product of groups, stored as sorted
  rows of coordinates.  It multiplies coordinatewise and never builds a
  table, which keeps large diamond and cycle spaces cheap.

All operations accept numpy index arrays, so loops over elements can be
written as vector operations.
"""
from __future__ import annotations

import itertools
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import GroupOrderError, NotAHomomorphism

DEFAULT_ORDER_CAP = 512
TABLE_CAP = 2048
_CHUNK = 1 << 20


def _scalarize(x):
    if isinstance(x, np.ndarray) and x.ndim == 0:
        return int(x)
    return x


class Group:
    """Interface shared by both group representations."""

    order: int
    name: str

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    @property
    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def conj(self, g, x):
        """g x g^-1"""
        return self.mul(self.mul(g, x), self.inv(g))

    def commutator(self, a, b):
        """a b a^-1 b^-1"""
        return self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))

    def power(self, g, k: int):
        r = 0
        base = g
        if k < 0:
            base, k = self.inv(g), -k
        while k:
            if k & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            k >>= 1
        return _scalarize(np.asarray(r))

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        els = self.elements
        orders = np.zeros(n, dtype=np.int64)
        cur = els.copy()
        k = 1
        while True:
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            if (orders > 0).all():
                return orders
            cur = self.mul(cur, els)
            k += 1

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders))

    @cached_property
    def generators(self) -> tuple:
        """A small generating set, chosen greedily by decreasing element order."""
        if self.order == 1:
            return ()
        orders = self.element_orders
        cand = sorted(range(1, self.order), key=lambda g: (-orders[g], g))
        gens: list[int] = []
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        for g in cand:
            if mask[g]:
                continue
            gens.append(g)
            sub = closure(self, gens)
            mask[:] = False
            mask[sub] = True
            if len(sub) == self.order:
                break
        return tuple(gens)

    def is_abelian(self) -> bool:
        els = self.elements
        for g in self.generators:
            if not np.array_equal(self.mul(g, els), self.mul(els, g)):
                return False
        return True

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} order={self.order}>"


class FiniteGroup(Group):
    """A group given by its full multiplication table."""

    def __init__(self, table, name: str = "G", labels: Sequence[str] | None = None,
                 check: bool = True):
        t = np.ascontiguousarray(np.asarray(table, dtype=np.int64))
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise ValueError("table must be a non-empty square array")
        n = t.shape[0]
        self.order = n
        self.table = t
        self.name = name
        self.labels = list(labels) if labels is not None else None
        if check:
            self._validate()
        inv = np.argmax(t == 0, axis=1)
        self.inverse = inv.astype(np.int64)

    def _validate(self):
        t, n = self.table, self.order
        if t.min() < 0 or t.max() >= n:
            raise ValueError("table entries out of range")
        ar = np.arange(n)
        if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
            raise ValueError("element 0 must be the identity")
        srt = np.sort(t, axis=1)
        if not (srt == ar).all() or not (np.sort(t, axis=0) == ar[:, None]).all():
            raise ValueError("table is not a Latin square")
        w = kernels.associativity_witness(t)
        if w is not None:
            raise ValueError(f"table is not associative at {w}")

    def mul(self, a, b):
        return _scalarize(self.table[a, b])

    def inv(self, a):
        return _scalarize(self.inverse[a])

    def label(self, g: int) -> str:
        if self.labels is not None:
            return self.labels[g]
        return str(g)

    def same_table(self, other: "FiniteGroup") -> bool:
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)


class TupleGroup(Group):
    """Subgroup of a product of groups, stored as sorted coordinate rows."""

    def __init__(self, factors: Sequence[Group], rows, name: str = "", check: bool = False):
        self.factors = list(factors)
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, len(self.factors))
        radix = [f.order for f in self.factors]
        w = np.ones(len(radix), dtype=np.int64)
        total = 1
        for c in range(len(radix) - 1, -1, -1):
            w[c] = total
            total *= radix[c]
        if total >= 2 ** 62:
            raise GroupOrderError("product too large to encode")
        self.weights = w
        codes = rows @ w if len(radix) else np.zeros(len(rows), dtype=np.int64)
        order = np.argsort(codes, kind="stable")
        codes = codes[order]
        if len(codes) == 0 or codes[0] != 0:
            raise ValueError("tuple group must contain the identity tuple")
        if len(codes) > 1 and (np.diff(codes) == 0).any():
            raise ValueError("duplicate rows")
        self.rows = rows[order]
        self.codes = codes
        self.order = len(codes)
        self.name = name or "×".join(f.name for f in self.factors)
        if check:
            gens = np.arange(self.order)
            for g in self.generators_hint():
                self.mul(gens, g)

    def generators_hint(self):
        return range(min(self.order, 8))

    def encode(self, rows) -> np.ndarray:
        return np.asarray(rows, dtype=np.int64) @ self.weights

    def index_of(self, rows, strict: bool = True):
        """Indices of coordinate rows; -1 (or an error) when absent."""
        rows = np.asarray(rows, dtype=np.int64)
        codes = rows @ self.weights
        idx = np.searchsorted(self.codes, codes)
        idx_c = np.minimum(idx, self.order - 1)
        ok = self.codes[idx_c] == codes
        if strict:
            if not np.all(ok):
                raise ValueError("tuple not in group")
            return _scalarize(idx_c)
        return _scalarize(np.where(ok, idx_c, -1))

    def contains_rows(self, rows) -> np.ndarray:
        return np.asarray(self.index_of(rows, strict=False)) >= 0

    def mul(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        ra, rb = self.rows[a], self.rows[b]
        prod = np.empty(ra.shape, dtype=np.int64)
        for c, f in enumerate(self.factors):
            prod[..., c] = f.mul(ra[..., c], rb[..., c])
        return self.index_of(prod)

    def inv(self, a):
        ra = self.rows[np.asarray(a)]
        out = np.empty(ra.shape, dtype=np.int64)
        for c, f in enumerate(self.factors):
            out[..., c] = f.inv(ra[..., c])
        return self.index_of(out)

    def coordinate(self, c: int) -> "GroupHom":
        """Projection onto factor ``c``."""
        return GroupHom(self, self.factors[c], self.rows[:, c], check=False)

    def to_finite_group(self, cap: int = TABLE_CAP, name: str | None = None) -> FiniteGroup:
        if self.order > cap:
            raise GroupOrderError(f"order {self.order} exceeds table cap {cap}")
        n = self.order
        els = np.arange(n)
        table = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            table[a] = self.mul(a, els)
        return FiniteGroup(table, name=name or self.name, check=False)


# ---------------------------------------------------------------- subgroups

class Subgroup:
    """A subgroup of ``parent`` given by its sorted element indices."""

    def __init__(self, parent: Group, elements, normal: bool | None = None):
        el = np.unique(np.asarray(list(elements) if not isinstance(elements, np.ndarray)
                                  else elements, dtype=np.int64))
        if len(el) == 0 or el[0] != 0:
            raise ValueError("subgroup must contain the identity")
        if el[-1] >= parent.order:
            raise ValueError("element index out of range")
        self.parent = parent
        self.elements = el
        self._normal = normal

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.elements] = True
        return m

    def __contains__(self, g) -> bool:
        return bool(self.mask[g])

    def contains(self, g) -> np.ndarray:
        return self.mask[np.asarray(g)]

    def __len__(self):
        return self.order

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and np.array_equal(self.elements, other.elements))

    def __hash__(self):
        return hash((id(self.parent), self.elements.tobytes()))

    def __le__(self, other: "Subgroup") -> bool:
        return bool(other.mask[self.elements].all())

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_full(self) -> bool:
        return self.order == self.parent.order

    def is_normal(self) -> bool:
        if self._normal is None:
            G = self.parent
            self._normal = all(bool(self.mask[G.conj(g, self.elements)].all())
                               for g in G.generators)
        return self._normal

    def intersect(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, self.elements[other.mask[self.elements]])

    def as_group(self, name: str | None = None) -> tuple[Group, "GroupHom"]:
        """The subgroup as a group in its own right, with its inclusion."""
        G = self.parent
        el = self.elements
        nm = name or f"{G.name}'"
        if isinstance(G, TupleGroup):
            H: Group = TupleGroup(G.factors, G.rows[el], name=nm)
        else:
            pos = np.full(G.order, -1, dtype=np.int64)
            pos[el] = np.arange(len(el))
            sub = pos[G.table[np.ix_(el, el)]]
            H = FiniteGroup(sub, name=nm, check=False)
        return H, GroupHom(H, G, el, check=False)

    def __repr__(self):
        return f"<Subgroup of {self.parent.name} order={self.order}>"


def closure(G: Group, gens: Iterable[int]) -> np.ndarray:
    """Sorted elements of the subgroup generated by ``gens``."""
    gens = [int(g) for g in gens]
    for g in gens:
        if g < 0 or g >= G.order:
            raise IndexError(f"element {g} out of range")
    gens = sorted(set(g for g in gens if g != 0))
    if isinstance(G, FiniteGroup):
        return kernels.closure(G.table, gens)
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    frontier = np.array([0], dtype=np.int64)
    while frontier.size and gens:
        new = np.unique(np.concatenate([np.atleast_1d(G.mul(frontier, g)) for g in gens]))
        new = new[~mask[new]]
        mask[new] = True
        frontier = new
    return np.flatnonzero(mask).astype(np.int64)


def generated_subgroup(G: Group, gens: Iterable[int]) -> Subgroup:
    return Subgroup(G, closure(G, gens))


def trivial_subgroup(G: Group) -> Subgroup:
    return Subgroup(G, [0], normal=True)


def full_subgroup(G: Group) -> Subgroup:
    return Subgroup(G, np.arange(G.order), normal=True)


def join(G: Group, subs: Iterable[Subgroup]) -> Subgroup:
    gens: list[int] = []
    for S in subs:
        gens.extend(int(x) for x in S.elements)
    return generated_subgroup(G, gens)


def _pairs_chunks(K: np.ndarray, L: np.ndarray):
    step = max(1, _CHUNK // max(1, len(L)))
    for s in range(0, len(K), step):
        kk = K[s:s + step]
        yield np.repeat(kk, len(L)), np.tile(L, len(kk))


def commutator_elements(G: Group, K: Subgroup, L: Subgroup) -> np.ndarray:
    """Distinct values of k l k^-1 l^-1."""
    _check_parent(G, K, L)
    found = np.zeros(G.order, dtype=bool)
    for kk, ll in _pairs_chunks(K.elements, L.elements):
        found[np.atleast_1d(G.commutator(kk, ll))] = True
    return np.flatnonzero(found)


def commuting_witness(G: Group, K: Subgroup, L: Subgroup):
    """A pair (k, l) with kl != lk, or None when K and L commute."""
    _check_parent(G, K, L)
    for kk, ll in _pairs_chunks(K.elements, L.elements):
        c = np.atleast_1d(G.commutator(kk, ll))
        bad = np.flatnonzero(c != 0)
        if bad.size:
            i = bad[0]
            return int(kk[i]), int(ll[i])
    return None


def _check_parent(G, *subs):
    for S in subs:
        if S.parent is not G:
            raise ValueError("subgroup of a different group")


def commutator_subgroup(G: Group, K: Subgroup, L: Subgroup) -> Subgroup:
    """[K, L], the subgroup generated by all k l k^-1 l^-1."""
    return generated_subgroup(G, commutator_elements(G, K, L))


def derived_subgroup(G: Group) -> Subgroup:
    F = full_subgroup(G)
    return commutator_subgroup(G, F, F)


def centre(G: Group) -> Subgroup:
    els = G.elements
    ok = np.ones(G.order, dtype=bool)
    for g in G.generators:
        ok &= G.mul(els, g) == G.mul(g, els)
    return Subgroup(G, np.flatnonzero(ok), normal=True)


def normal_closure(G: Group, gens: Iterable[int]) -> Subgroup:
    gens = list(int(g) for g in gens)
    S = generated_subgroup(G, gens)
    while True:
        conj = set(int(x) for x in S.elements)
        for g in G.generators:
            conj.update(int(x) for x in np.atleast_1d(G.conj(g, S.elements)))
        T = generated_subgroup(G, conj)
        if T.order == S.order:
            return Subgroup(G, T.elements, normal=True)
        S = T


# ------------------------------------------------------------ homomorphisms

class GroupHom:
    """A homomorphism given by the image of every domain element."""

    def __init__(self, domain: Group, codomain: Group, images, check: bool = True,
                 name: str = ""):
        im = np.ascontiguousarray(np.asarray(images, dtype=np.int64))
        if im.shape != (domain.order,):
            raise ValueError("images must list one value per domain element")
        if domain.order and (im.min() < 0 or im.max() >= codomain.order):
            raise ValueError("image index out of range")
        self.domain = domain
        self.codomain = codomain
        self.images = im
        self.name = name
        if check:
            w = self.violation()
            if w is not None:
                raise NotAHomomorphism(f"not a homomorphism at {w}")

    def violation(self):
        """A pair (a, b) with h(ab) != h(a)h(b), or None."""
        D, C, im = self.domain, self.codomain, self.images
        if im[0] != 0:
            return (0, 0)
        if isinstance(D, FiniteGroup) and isinstance(C, FiniteGroup) and D.order <= 1024:
            return kernels.hom_witness(D.table, C.table, im)
        els = D.elements
        for g in D.generators:
            lhs = im[np.atleast_1d(D.mul(els, g))]
            rhs = np.atleast_1d(C.mul(im, im[g]))
            bad = np.flatnonzero(lhs != rhs)
            if bad.size:
                return (int(bad[0]), int(g))
        return None

    def __call__(self, x):
        return _scalarize(self.images[x])

    def compose(self, first: "GroupHom") -> "GroupHom":
        """self ∘ first"""
        if first.codomain is not self.domain:
            raise ValueError("cannot compose: codomain/domain mismatch")
        return GroupHom(first.domain, self.codomain, self.images[first.images], check=False)

    def __matmul__(self, first: "GroupHom") -> "GroupHom":
        return self.compose(first)

    def equals(self, other: "GroupHom") -> bool:
        return np.array_equal(self.images, other.images)

    def kernel(self) -> Subgroup:
        return Subgroup(self.domain, np.flatnonzero(self.images == 0), normal=True)

    def image(self) -> Subgroup:
        return Subgroup(self.codomain, np.unique(self.images))

    def is_surjective(self) -> bool:
        return len(np.unique(self.images)) == self.codomain.order

    def is_injective(self) -> bool:
        return len(np.unique(self.images)) == self.domain.order

    def is_iso(self) -> bool:
        return self.domain.order == self.codomain.order and self.is_injective()

    def inverse(self) -> "GroupHom":
        if not self.is_iso():
            raise ValueError("not an isomorphism")
        inv = np.empty(self.domain.order, dtype=np.int64)
        inv[self.images] = np.arange(self.domain.order)
        return GroupHom(self.codomain, self.domain, inv, check=False)

    def restrict(self, S: Subgroup) -> "GroupHom":
        H, inc = S.as_group()
        return self.compose(inc)

    def __repr__(self):
        return f"<GroupHom {self.domain.name} -> {self.codomain.name}>"


def kernel(h: GroupHom) -> Subgroup:
    return h.kernel()


def image(h: GroupHom) -> Subgroup:
    return h.image()


def is_iso(h: GroupHom) -> bool:
    return h.is_iso()


def identity_hom(G: Group) -> GroupHom:
    return GroupHom(G, G, G.elements, check=False)


def trivial_hom(G: Group, H: Group) -> GroupHom:
    return GroupHom(G, H, np.zeros(G.order, dtype=np.int64), check=False)


def hom_from_function(G: Group, H: Group, fn, check: bool = True) -> GroupHom:
    return GroupHom(G, H, [fn(g) for g in range(G.order)], check=check)


# --------------------------------------------------------------- quotients

def quotient(G: Group, N: Subgroup, name: str | None = None) -> tuple[FiniteGroup, GroupHom]:
    """G/N with the canonical surjection; cosets are numbered by least member."""
    if N.parent is not G:
        raise ValueError("subgroup of a different group")
    if not N.is_normal():
        raise ValueError("subgroup is not normal")
    n = G.order
    label = np.full(n, -1, dtype=np.int64)
    reps = []
    for g in range(n):
        if label[g] < 0:
            coset = np.atleast_1d(G.mul(g, N.elements))
            label[coset] = len(reps)
            reps.append(g)
    reps_a = np.array(reps, dtype=np.int64)
    m = len(reps)
    if m > TABLE_CAP:
        raise GroupOrderError("quotient too large")
    table = np.empty((m, m), dtype=np.int64)
    for i, r in enumerate(reps_a):
        table[i] = label[np.atleast_1d(G.mul(r, reps_a))]
    Q = FiniteGroup(table, name=name or f"{G.name}/N", check=False)
    return Q, GroupHom(G, Q, label, check=False)


def abelianize(G: Group) -> tuple[FiniteGroup, GroupHom]:
    """ab G = G/[G,G] and the quotient map."""
    return quotient(G, derived_subgroup(G), name=f"ab({G.name})")


def induced_on_quotient(h: GroupHom, q: GroupHom) -> GroupHom:
    """The map Q -> cod(h) through which h factors, for surjective q."""
    out = np.full(q.codomain.order, -1, dtype=np.int64)
    out[q.images] = h.images
    # consistency: h constant on fibres of q
    if not np.array_equal(out[q.images], h.images):
        raise ValueError("map does not factor through the quotient")
    return GroupHom(q.codomain, h.codomain, out, check=False)


# ------------------------------------------------------------ constructions

def cyclic(n: int, name: str | None = None) -> FiniteGroup:
    ar = np.arange(n)
    return FiniteGroup((ar[:, None] + ar[None, :]) % n, name=name or f"C{n}", check=False)


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """G × H with (g, h) stored at index g·|H| + h."""
    m = H.order
    tg = G.table[:, None, :, None]
    th = H.table[None, :, None, :]
    t = (tg * m + th).reshape(G.order * m, G.order * m)
    return FiniteGroup(t, name=name or f"{G.name}×{H.name}", check=False)


def product_projections(G: FiniteGroup, H: FiniteGroup, P: FiniteGroup):
    m = H.order
    els = np.arange(P.order)
    return (GroupHom(P, G, els // m, check=False), GroupHom(P, H, els % m, check=False))


def abelian_group(orders: Sequence[int], name: str | None = None) -> FiniteGroup:
    G = cyclic(1)
    for d in orders:
        G = direct_product(G, cyclic(d)) if G.order > 1 else cyclic(d)
    G.name = name or "×".join(f"C{d}" for d in orders) or "C1"
    return G


_SUP = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


def _word_labels(base: int, r: str, s: str) -> list[str]:
    """Labels r^i s^j for index i + base·j."""
    out = []
    for idx in range(2 * base):
        i, j = idx % base, idx // base
        w = ("" if i == 0 else r if i == 1 else r + str(i).translate(_SUP)) + (s if j else "")
        out.append(w or "e")
    return out


def dihedral(m: int, name: str | None = None) -> FiniteGroup:
    """Order 2m: r^i s^j at index i + m j."""
    n = 2 * m
    t = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        i, j = a % m, a // m
        for b in range(n):
            k, l = b % m, b // m
            r = (i + (k if j == 0 else -k)) % m
            t[a, b] = r + m * ((j + l) % 2)
    return FiniteGroup(t, name=name or f"D{m}", labels=_word_labels(m, "r", "s"), check=False)


def dicyclic(m: int, name: str | None = None) -> FiniteGroup:
    """Order 4m: a^i x^j at index i + 2m j, with x^2 = a^m and x a x^-1 = a^-1."""
    h = 2 * m
    n = 4 * m
    t = np.empty((n, n), dtype=np.int64)
    for p in range(n):
        i, j = p % h, p // h
        for q in range(n):
            k, l = q % h, q // h
            r = i + (k if j == 0 else -k) + (m if (j and l) else 0)
            t[p, q] = (r % h) + h * ((j + l) % 2)
    return FiniteGroup(t, name=name or f"Dic{m}", labels=_word_labels(h, "a", "x"), check=False)


def quaternion() -> FiniteGroup:
    return dicyclic(2, name="Q8")


def from_permutations(gens: Sequence[Sequence[int]], cap: int = DEFAULT_ORDER_CAP,
                      name: str = "G") -> tuple[FiniteGroup, list[tuple]]:
    """Close permutation generators into a Cayley table.

    Returns the group and the list of permutations, in index order; the
    identity permutation is index 0.
    """
    gens = [tuple(int(x) for x in g) for g in gens]
    deg = len(gens[0]) if gens else 0
    for g in gens:
        if len(g) != deg or sorted(g) != list(range(deg)):
            raise ValueError("generators must be permutations of one degree")
    ident = tuple(range(deg))
    perms = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[p[i]] for i in range(deg))  # apply p then g
                if q not in index:
                    if len(perms) >= cap:
                        raise GroupOrderError(f"group order exceeds cap {cap}")
                    index[q] = len(perms)
                    perms.append(q)
                    nxt.append(q)
        frontier = nxt
    n = len(perms)
    P = np.array(perms, dtype=np.int64) if deg else np.zeros((1, 0), dtype=np.int64)
    t = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        # product a·b means: apply a, then b
        comp = P[:, P[a]] if deg else np.zeros((n, 0), dtype=np.int64)
        for b in range(n):
            t[a, b] = index[tuple(comp[b].tolist())]
    return FiniteGroup(t, name=name, check=False), perms


def symmetric(k: int) -> FiniteGroup:
    if k <= 1:
        return cyclic(1, name=f"S{k}")
    gens = [tuple([1, 0] + list(range(2, k))), tuple(list(range(1, k)) + [0])]
    G, _ = from_permutations(gens, cap=10 ** 6, name=f"S{k}")
    return G


def alternating(k: int) -> FiniteGroup:
    gens = [tuple([1, 2, 0] + list(range(3, k)))]
    for i in range(3, k):
        p = list(range(k))
        p[0], p[1], p[i] = p[1], p[i], p[0]
        gens.append(tuple(p))
    G, _ = from_permutations(gens, cap=10 ** 6, name=f"A{k}")
    return G


def semidirect_product(K: FiniteGroup, X: FiniteGroup, action: Sequence[Sequence[int]],
                       name: str | None = None) -> FiniteGroup:
    """K ⋊ X where ``action[x]`` is the automorphism of K given by x.

    The pair (k, x) is stored at index k + |K|·x and multiplies as
    (k, x)(k', x') = (k · x(k'), x x').
    """
    nk, nx = K.order, X.order
    act = np.asarray(action, dtype=np.int64)
    n = nk * nx
    ks = np.arange(n) % nk
    xs = np.arange(n) // nk
    t = np.empty((n, n), dtype=np.int64)
    for p in range(n):
        k, x = ks[p], xs[p]
        kk = K.table[k, act[x][ks]]
        t[p] = kk + nk * X.table[x, xs]
    return FiniteGroup(t, name=name or f"{K.name}⋊{X.name}", check=False)


# -------------------------------------------------------- morphism searches

def extend_to_hom(G: Group, H: Group, gens: Sequence[int], images: Sequence[int]):
    """The homomorphism sending gens to images, or None if there is none.

    ``gens`` must generate G.
    """
    phi = np.full(G.order, -1, dtype=np.int64)
    phi[0] = 0
    gens_a = np.asarray(gens, dtype=np.int64)
    imgs_a = np.asarray(images, dtype=np.int64)
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        p = np.atleast_1d(G.mul(frontier[:, None], gens_a[None, :])).ravel()
        v = np.atleast_1d(H.mul(phi[frontier][:, None], imgs_a[None, :])).ravel()
        fresh = phi[p] < 0
        phi[p[fresh]] = v[fresh]
        if not np.array_equal(phi[p], v):
            return None
        frontier = np.unique(p[fresh])
    if (phi < 0).any():
        raise ValueError("generators do not generate the group")
    return GroupHom(G, H, phi, check=False)


def search_homs(G: Group, H: Group, candidates: Sequence[Sequence[int]],
                gens: Sequence[int] | None = None, bijective: bool = False):
    """Yield homomorphisms G -> H with gens[i] mapped into candidates[i]."""
    gens = list(G.generators) if gens is None else list(gens)
    if bijective and G.order != H.order:
        return
    for combo in itertools.product(*candidates):
        h = extend_to_hom(G, H, gens, combo)
        if h is None:
            continue
        if bijective and not h.is_injective():
            continue
        yield h


def all_homomorphisms(G: Group, H: Group) -> list[GroupHom]:
    og, oh = G.element_orders, H.element_orders
    gens = list(G.generators)
    cands = [[h for h in range(H.order) if og[g] % oh[h] == 0] for g in gens]
    return list(search_homs(G, H, cands, gens))


def find_isomorphism(G: Group, H: Group):
    if G.order != H.order:
        return None
    og, oh = G.element_orders, H.element_orders
    if not np.array_equal(np.sort(og), np.sort(oh)):
        return None
    gens = list(G.generators)
    cands = [[h for h in range(H.order) if oh[h] == og[g]] for g in gens]
    for h in search_homs(G, H, cands, gens, bijective=True):
        return h
    return None


def is_isomorphic(G: Group, H: Group) -> bool:
    return find_isomorphism(G, H) is not None


def automorphisms(G: Group) -> list[GroupHom]:
    og = G.element_orders
    gens = list(G.generators)
    cands = [[h for h in range(G.order) if og[h] == og[g]] for g in gens]
    return list(search_homs(G, G, cands, gens, bijective=True))


def normal_subgroups(G: Group) -> list[Subgroup]:
    """Every normal subgroup, by joining normal closures of single elements."""
    atoms = []
    seen_atoms = set()
    for g in range(G.order):
        N = normal_closure(G, [g])
        key = N.elements.tobytes()
        if key not in seen_atoms:
            seen_atoms.add(key)
            atoms.append(N)
    found = {trivial_subgroup(G).elements.tobytes(): trivial_subgroup(G)}
    queue = [trivial_subgroup(G)]
    while queue:
        N = queue.pop()
        for M in atoms:
            if M <= N:
                continue
            J = join(G, [N, M])
            key = J.elements.tobytes()
            if key not in found:
                found[key] = Subgroup(G, J.elements, normal=True)
                queue.append(found[key])
    return sorted(found.values(), key=lambda S: (S.order, S.elements.tolist()))


def all_subgroups(G: Group) -> list[Subgroup]:
    cyc = {}
    for g in range(G.order):
        C = generated_subgroup(G, [g])
        cyc.setdefault(C.elements.tobytes(), C)
    atoms = list(cyc.values())
    found = {trivial_subgroup(G).elements.tobytes(): trivial_subgroup(G)}
    queue = [trivial_subgroup(G)]
    while queue:
        S = queue.pop()
        for C in atoms:
            if C <= S:
                continue
            J = join(G, [S, C])
            key = J.elements.tobytes()
            if key not in found:
                found[key] = J
                queue.append(J)
    return sorted(found.values(), key=lambda S: (S.order, S.elements.tolist()))


def invariant_factors_of_abelian(G: Group) -> tuple[int, ...]:
    """Invariant factors of an abelian group, read off from element orders."""
    from .ablinalg import factor_counts_to_invariants

    if not G.is_abelian():
        raise ValueError("group is not abelian")
    orders = G.element_orders
    n = G.order
    counts = {d: int(np.sum(d % orders == 0)) for d in range(1, n + 1) if n % d == 0}
    return tuple(factor_counts_to_invariants(n, counts))

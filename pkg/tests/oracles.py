"""Independent brute-force oracles used to cross-check the library.

Everything here works on plain Python tuples and dictionaries and avoids the
library's enumerators, Smith normal form and certificates, so agreement is
evidence rather than a tautology.
"""
from __future__ import annotations

import itertools
from collections import deque
from math import gcd, prod


def cayley(G):
    """Multiplication table and inverses of a library group as lists."""
    import numpy as np
    els = np.arange(G.order)
    tab = np.asarray(G.mul(els[:, None], els[None, :])).reshape(G.order, G.order)
    return tab.tolist(), [int(v) for v in np.atleast_1d(G.inv(els))]


# ------------------------------------------------------ abelian groups

def ab_elements(orders):
    return list(itertools.product(*[range(d) for d in orders]))


def apply_matrix(matrix_rows, x, cod_orders):
    return tuple(sum(a * b for a, b in zip(row, x)) % d
                 for row, d in zip(matrix_rows, cod_orders))


def invariants_from_torsion_counts(order, killed):
    """The divisibility chain whose m-torsion has ``killed(m)`` elements."""
    divs = [d for d in range(1, order + 1) if order % d == 0]
    for chain in _chains(order, 2):
        if all(prod(gcd(m, f) for f in chain) == killed(m) for m in divs):
            return chain
    raise AssertionError("torsion counts describe no abelian group")


def _chains(n, lo):
    if n == 1:
        yield ()
        return
    for d in range(lo, n + 1):
        if n % d == 0:
            for tail in _chains(n // d, d):
                if not tail or tail[0] % d == 0:
                    yield (d,) + tail


def brute_homology(maps, k):
    """Invariant factors of ker/im at position k by listing elements.

    ``maps`` is a list of (domain_orders, codomain_orders, matrix_rows).
    """
    groups = [m[0] for m in maps] + [maps[-1][1]]
    C = groups[k]
    els = ab_elements(C)
    if k < len(maps):
        _, cod, M = maps[k]
        zero = tuple(0 for _ in cod)
        ker = {x for x in els if apply_matrix(M, x, cod) == zero}
    else:
        ker = set(els)
    if k > 0:
        dom, _, M = maps[k - 1]
        im = {apply_matrix(M, y, C) for y in ab_elements(dom)}
    else:
        im = {tuple(0 for _ in C)}
    assert im <= ker, "not a complex"
    order = len(ker) // len(im)

    def killed(m):
        # cosets x + im of ker with m·x in im
        hits = sum(1 for x in ker if tuple(m * v % d for v, d in zip(x, C)) in im)
        return hits // len(im)

    return invariants_from_torsion_counts(order, killed)


def random_complex(rng, max_order=64):
    """C0 -> C1 -> C2 with h1∘h0 = 0, found by listing ker h1.

    ``rng`` is a numpy Generator; the result is in the format of
    ``brute_homology``.
    """
    choices = [(2,), (3,), (4,), (2, 2), (6,), (2, 4), (8,), (2, 2, 2), (4, 4), (2, 6),
               (2, 8), (3, 3), (2, 2, 4), (4, 8), (2, 2, 2, 2), (8, 8), (2, 4, 8)]
    fits = [c for c in choices if prod(c) <= max_order]
    C0, C1, C2 = (fits[int(rng.integers(len(fits)))] for _ in range(3))

    def random_map(dom, cod, allowed=None):
        cols = []
        for d in dom:
            pool = [x for x in (allowed if allowed is not None else ab_elements(cod))
                    if all(d * v % m == 0 for v, m in zip(x, cod))]
            cols.append(pool[int(rng.integers(len(pool)))])
        return [[cols[j][i] for j in range(len(dom))] for i in range(len(cod))]

    M1 = random_map(C1, C2)
    ker = [x for x in ab_elements(C1) if not any(apply_matrix(M1, x, C2))]
    M0 = random_map(C0, C1, ker)
    return [(C0, C1, M0), (C1, C2, M1)]


# ------------------------------------------------------- second cohomology

def brute_h2(Z, a_orders, limit=20000):
    """Invariant factors of H²(Z, A) by listing normalized 2-cochains.

    Z is any library group with identity 0; A = ⊕ Z/a_i.  Returns None
    when the cochain space is larger than ``limit``.
    """
    tab, _ = cayley(Z)
    n = len(tab)
    A = ab_elements(a_orders)
    zero = tuple(0 for _ in a_orders)

    def add(x, y):
        return tuple((u + v) % d for u, v, d in zip(x, y, a_orders))

    def neg(x):
        return tuple(-u % d for u, d in zip(x, a_orders))

    slots = [(x, y) for x in range(1, n) for y in range(1, n)]
    if len(A) ** len(slots) > limit:
        return None

    def full(values):
        f = {(x, y): zero for x in range(n) for y in range(n)}
        f.update(zip(slots, values))
        return f

    def is_cocycle(f):
        return all(add(f[(y, z)], f[(x, tab[y][z])]) == add(f[(tab[x][y], z)], f[(x, y)])
                   for x in range(1, n) for y in range(1, n) for z in range(1, n))

    cocycles = []
    for values in itertools.product(A, repeat=len(slots)):
        f = full(values)
        if is_cocycle(f):
            cocycles.append(tuple(f[s] for s in slots))
    bounds = set()
    for values in itertools.product(A, repeat=n - 1):
        g = dict(zip(range(1, n), values))
        g[0] = zero
        bounds.add(tuple(add(add(g[x], g[y]), neg(g[tab[x][y]])) for x, y in slots))
    order = len(cocycles) // len(bounds)

    def killed(m):
        hits = 0
        for c in cocycles:
            mc = tuple(tuple(m * u % d for u, d in zip(v, a_orders)) for v in c)
            hits += mc in bounds
        return hits // len(bounds)

    return invariants_from_torsion_counts(order, killed)


# -------------------------------------------------- retraction search

def _closure_words(mul, identity, gens):
    """BFS over words in gens: element -> (parent element, generator index)."""
    seen = {identity: None}
    q = deque([identity])
    while q:
        x = q.popleft()
        for j, g in enumerate(gens):
            y = mul(x, g)
            if y not in seen:
                seen[y] = (x, j)
                q.append(y)
    return seen


def _small_generating_set(elements, mul, identity):
    gens = []
    span = {identity}
    for e in elements:
        if e not in span:
            gens.append(e)
            span = set(_closure_words(mul, identity, gens))
    return gens


def retraction_exists(F, I, max_candidates=200000):
    """Search for a homomorphism r: □ -> A with r(κ_I(a)) = a.

    □ is enumerated from scratch as the set of all 2×…×2 matrices of top
    elements related by the kernel pairs.  Returns True, False, or None
    when the search space exceeds ``max_candidates``.
    """
    X = F.top_object
    tab, _ = cayley(X)
    top = F.top
    maps = [[int(v) for v in F.top_map(i).images] for i in range(F.n)]
    # all diamonds, built entry by entry
    diamonds = [()]
    for J in range(top + 1):
        nxt = []
        for d in diamonds:
            for x in range(X.order):
                if all(maps[i][x] == maps[i][d[J ^ (1 << i)]]
                       for i in range(F.n) if J >> i & 1):
                    nxt.append(d + (x,))
        diamonds = nxt
    box = set(diamonds)

    def mul(u, v):
        return tuple(tab[a][b] for a, b in zip(u, v))

    ident = tuple([0] * (top + 1))
    kern = [set(x for x in range(X.order) if maps[i][x] == 0) for i in range(F.n)]
    A = sorted(set.intersection(*kern)) if kern else list(range(X.order))
    if any(tab[a][b] != tab[b][a] for a in A for b in A):
        return False
    gens = _small_generating_set(sorted(box), mul, ident)
    if len(A) ** len(gens) > max_candidates:
        return None
    words = _closure_words(mul, ident, gens)
    kappa = {}
    for a in A:
        k = [0] * (top + 1)
        k[I] = a
        kappa[tuple(k)] = a
    order = sorted(words, key=lambda e: _depth(words, e))
    for imgs in itertools.product(A, repeat=len(gens)):
        r = {ident: 0}
        for e in order:
            if e == ident:
                continue
            p, j = words[e]
            r[e] = tab[r[p]][imgs[j]]
        if all(r[mul(e, g)] == tab[r[e]][imgs[j]] for e in box for j, g in enumerate(gens)) \
                and all(r[k] == a for k, a in kappa.items()):
            return True
    return False


def _depth(words, e):
    d = 0
    while words[e] is not None:
        e = words[e][0]
        d += 1
    return d


# ---------------------------------------------------------- sum condition

def enumerated_sum_condition(T, cert):
    """Check Σ(-1)^i ς(c_i) = 0 on every element of Δ(T, n+1), listed in full."""
    n = cert.n
    cyc = cert.cycles
    faces = [[int(v) for v in h.images] for h in cyc.faces]
    X = T.level(n - 1)
    tab, inv = cayley(X)
    vs = [int(v) for v in cert.varsigma]
    m = n + 1
    N = cyc.order
    # cycles grouped by their first j faces, for j = 0..m
    by_prefix = []
    for j in range(m + 1):
        idx: dict = {}
        for c in range(N):
            idx.setdefault(tuple(faces[i][c] for i in range(j)), []).append(c)
        by_prefix.append(idx)
    count = 0
    stack = [()]
    while stack:
        t = stack.pop()
        j = len(t)
        if j == m + 1:
            acc = 0
            for i, c in enumerate(t):
                acc = tab[acc][vs[c] if i % 2 == 0 else inv[vs[c]]]
            if acc != 0:
                return False, count
            count += 1
            continue
        key = tuple(faces[j - 1][t[i]] for i in range(j))
        for c in by_prefix[j].get(key, ()):
            stack.append(t + (c,))
    return True, count

"""One-fold central extensions: cocycles, classification and Baer sums.

Two independent routes to the same group.  The cochain route builds the
normalized complex with trivial coefficients and reads H^m off Smith normal
forms.  The extension route enumerates every normalized 2-cocycle, builds
the extension, and merges extensions by searching explicit equivalences;
the Baer sum of classes is computed with cube operations (product over Z,
then pushforward along the codiagonal), never with cocycle arithmetic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd, prod

import numpy as np

from .ablinalg import (AbHom, FinAbGroup, IntMatrix, factor_counts_to_invariants, homology_at,
                       smith_normal_form)
from .cubes import arrow, direction, product_over_Z, pushforward_cube
from .errors import BudgetExceeded, PreconditionError
from .groups import (FiniteGroup, Group, GroupHom, abelian_group, extend_to_hom,
                     invariant_factors_of_abelian)

COHOMOLOGY_CAPS = {"max_base": 6, "max_coeff": 8}
CLASSIFY_CAP = 32


def as_finab(A) -> FinAbGroup:
    if isinstance(A, FinAbGroup):
        return A
    return FinAbGroup(invariant_factors_of_abelian(A))


# ------------------------------------------------------- cochain complex

def _tuples(Z: Group, m: int) -> list[tuple]:
    return list(itertools.product(range(1, Z.order), repeat=m))


def coboundary_matrix(Z: FiniteGroup, m: int) -> list[list[int]]:
    """Integer matrix of δ: C^m -> C^{m+1} on normalized cochains."""
    cols = {t: k for k, t in enumerate(_tuples(Z, m))}
    rows = _tuples(Z, m + 1)
    M = [[0] * len(cols) for _ in rows]
    if m == 0:
        return M
    tab = Z.table
    for r, x in enumerate(rows):
        terms = [(1, x[1:])]
        for i in range(m):
            p = int(tab[x[i], x[i + 1]])
            terms.append(((-1) ** (i + 1), x[:i] + (p,) + x[i + 2:]))
        terms.append(((-1) ** (m + 1), x[:m]))
        for sgn, t in terms:
            if 0 in t:
                continue
            M[r][cols[t]] += sgn
    return M


def _cochain_group(Z: Group, m: int, d: int) -> FinAbGroup:
    if m == 0:
        return FinAbGroup((d,))
    return FinAbGroup((d,) * ((Z.order - 1) ** m))


def cochain_complex(Z: FiniteGroup, d: int, top: int) -> list[AbHom]:
    """C^0 -> C^1 -> ... -> C^top with coefficients Z/d."""
    out = []
    for m in range(top):
        dom, cod = _cochain_group(Z, m, d), _cochain_group(Z, m + 1, d)
        M = coboundary_matrix(Z, m)
        out.append(AbHom(dom, cod, IntMatrix.from_rows(M, dom.rank) if M
                         else IntMatrix.zeros(cod.rank, dom.rank)))
    return out


def cohomology_group(Z: FiniteGroup, A, m: int, caps: dict | None = None) -> FinAbGroup:
    """H^m(Z, A) with trivial action, one cyclic factor of A at a time."""
    caps = {**COHOMOLOGY_CAPS, **(caps or {})}
    A = as_finab(A)
    if m not in (1, 2, 3):
        raise ValueError("degree must be 1, 2 or 3")
    if Z.order > caps["max_base"] or A.order > caps["max_coeff"]:
        raise BudgetExceeded(caps["max_base"], Z.order, "cohomology size cap")
    orders = []
    for d in A.invariant_factors:
        H = homology_at(cochain_complex(Z, d, m + 1), m)
        orders.extend(H.invariant_factors)
    return FinAbGroup.from_orders(orders)


# --------------------------------------------------------------- cocycles

@dataclass
class Cocycle2:
    Z: FiniteGroup
    A: FinAbGroup
    values: np.ndarray          # |Z|×|Z| table of A indices

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.int64)
        self._Ag = self.A.as_group()

    def is_normalized(self) -> bool:
        return not self.values[0].any() and not self.values[:, 0].any()

    def cocycle_witness(self):
        """(x, y, z) where f(x,y) + f(xy,z) ≠ f(y,z) + f(x,yz), or None."""
        t, f, add = self.Z.table, self.values, self._Ag.table
        n = self.Z.order
        x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
        lhs = add[f[x, y], f[t[x, y], z]]
        rhs = add[f[y, z], f[x, t[y, z]]]
        bad = np.argwhere(lhs != rhs)
        return tuple(int(v) for v in bad[0]) if len(bad) else None

    def is_cocycle(self) -> bool:
        return self.cocycle_witness() is None

    def __add__(self, other: "Cocycle2") -> "Cocycle2":
        return Cocycle2(self.Z, self.A, self._Ag.table[self.values, other.values])


def _vectors_to_cocycles(Z: Group, A: FinAbGroup, per_factor: list[np.ndarray]) -> np.ndarray:
    """Combine per-factor normalized cochain vectors into |Z|×|Z| index tables."""
    n = Z.order
    w = [prod(A.invariant_factors[i + 1:]) for i in range(A.rank)]
    idx = [(x, y) for x in range(1, n) for y in range(1, n)]
    combos = itertools.product(*[range(len(v)) for v in per_factor])
    out = []
    for combo in combos:
        tab = np.zeros((n, n), dtype=np.int64)
        for f, c in enumerate(combo):
            vec = per_factor[f][c]
            for k, (x, y) in enumerate(idx):
                tab[x, y] += w[f] * vec[k]
        out.append(tab)
    return np.array(out).reshape(-1, n, n)


def _cyclic_cocycles(Z: FiniteGroup, d: int) -> np.ndarray:
    """All normalized 2-cocycles with values in Z/d, as coefficient vectors."""
    N = (Z.order - 1) ** 2
    if N == 0:
        return np.zeros((1, 0), dtype=np.int64)
    M = IntMatrix.from_rows(coboundary_matrix(Z, 2), N)
    _, D, V = smith_normal_form(M)
    diag = D.diagonal() + [0] * (N - min(D.rows, D.cols))
    # kernel of x -> Mx mod d: x = V y with y_i a multiple of d / gcd(d, D_i)
    steps = [d // gcd(d, diag[i]) for i in range(N)]
    Vm = np.array(V.tolist(), dtype=object)
    ranges = [range(0, d, s) for s in steps]
    ys = np.array(list(itertools.product(*ranges)), dtype=object)
    xs = (ys @ Vm.T) % d
    out = np.array(xs.tolist(), dtype=np.int64)
    return out[np.lexsort(out.T[::-1])]


def _cyclic_coboundaries(Z: FiniteGroup, d: int) -> np.ndarray:
    """The image of δ: C^1 -> C^2 with values in Z/d."""
    N1 = Z.order - 1
    if N1 == 0:
        return np.zeros((1, 0), dtype=np.int64)
    M = np.array(coboundary_matrix(Z, 1), dtype=np.int64)
    gs = np.array(list(itertools.product(range(d), repeat=N1)), dtype=np.int64)
    return np.unique((gs @ M.T) % d, axis=0)


def normalized_cocycles(Z: FiniteGroup, A) -> list[Cocycle2]:
    A = as_finab(A)
    per = [_cyclic_cocycles(Z, d) for d in A.invariant_factors]
    if not per:
        return [Cocycle2(Z, A, np.zeros((Z.order, Z.order), dtype=np.int64))]
    return [Cocycle2(Z, A, t) for t in _vectors_to_cocycles(Z, A, per)]


@dataclass
class CocycleQuotient:
    """Z²/B² computed by brute force over explicit cochain vectors."""
    Z: FiniteGroup
    A: FinAbGroup
    factors: list                   # per cyclic factor: (cocycles, coboundary set, coset ids)
    n_cosets: list

    @property
    def order(self) -> int:
        return prod(self.n_cosets)

    def coset_of(self, c: Cocycle2) -> tuple:
        n = self.Z.order
        out = []
        for f, fac in enumerate(self.factors):
            ids = fac[2]
            vec = tuple(int(c.A.coords(int(c.values[x, y]))[f])
                        for x in range(1, n) for y in range(1, n))
            out.append(ids[vec])
        return tuple(out)

    def add(self, s: tuple, t: tuple) -> tuple:
        return tuple(self.factors[f][3][(s[f], t[f])] for f in range(len(s)))

    def invariants(self) -> tuple:
        """Invariant factors of Z²/B² from its element-order counts."""
        els = list(itertools.product(*[range(k) for k in self.n_cosets]))
        zero = tuple(0 for _ in self.n_cosets)
        n = len(els)

        def mult(k, x):
            acc = zero
            for _ in range(k):
                acc = self.add(acc, x)
            return acc

        counts = {k: sum(mult(k, x) == zero for x in els) for k in range(1, n + 1) if n % k == 0}
        return factor_counts_to_invariants(n, counts)


def cocycle_quotient(Z: FiniteGroup, A) -> CocycleQuotient:
    A = as_finab(A)
    factors, sizes = [], []
    for d in A.invariant_factors:
        Zs = _cyclic_cocycles(Z, d)
        Bs = _cyclic_coboundaries(Z, d)
        ids: dict = {}
        reps = []
        for z in Zs:
            key = tuple(int(v) for v in z)
            if key in ids:
                continue
            k = len(reps)
            reps.append(z)
            for v in (z + Bs) % d:
                ids[tuple(int(t) for t in v)] = k
        table = {}
        for s, r1 in enumerate(reps):
            for t, r2 in enumerate(reps):
                table[(s, t)] = ids[tuple(int(v) for v in (r1 + r2) % d)]
        factors.append((Zs, Bs, ids, table))
        sizes.append(len(reps))
    return CocycleQuotient(Z, A, factors, sizes)


# ------------------------------------------------------------ extensions

@dataclass
class Extension:
    """A central extension k: A -> X, f: X ↠ Z."""
    X: Group
    k: GroupHom
    f: GroupHom
    label: str = ""

    @property
    def Z(self) -> Group:
        return self.f.codomain

    @property
    def A(self) -> Group:
        return self.k.domain

    def check(self) -> bool:
        kern = self.f.kernel().elements
        img = np.unique(self.k.images)
        if not (self.f.is_surjective() and self.k.is_injective()
                and np.array_equal(kern, img)):
            return False
        X = self.X
        els = X.elements
        return all(np.array_equal(X.mul(a, els), X.mul(els, a)) for a in img)

    def cube(self):
        return arrow(self.f, name=self.label)


def extension_from_cocycle(c: Cocycle2, check: bool = True) -> Extension:
    """A×Z with (a,x)(b,y) = (a+b+f(x,y), xy); (a, x) sits at x·|A| + a."""
    if check:
        if not c.is_normalized():
            raise PreconditionError("cocycle is not normalized")
        w = c.cocycle_witness()
        if w is not None:
            raise PreconditionError(f"cocycle identity fails at {w}")
    Z, Ag = c.Z, c._Ag
    na, nz = Ag.order, Z.order
    el = np.arange(na * nz)
    a, x = el % na, el // na
    add = Ag.table
    prod_a = add[add[a[:, None], a[None, :]], c.values[x[:, None], x[None, :]]]
    prod_x = Z.table[x[:, None], x[None, :]]
    X = FiniteGroup(prod_x * na + prod_a, name=f"E({Z.name},{c.A.short_name()})", check=False)
    k = GroupHom(Ag, X, np.arange(na), check=False)
    f = GroupHom(X, Z, x, check=False)
    return Extension(X, k, f)


def _fiber_profile(E: Extension) -> tuple:
    orders = E.X.element_orders
    fib = E.f.images
    return tuple(tuple(sorted(orders[fib == z].tolist())) for z in range(E.Z.order))


def find_equivalence(E1: Extension, E2: Extension, profiles: tuple | None = None):
    """An isomorphism φ: X1 -> X2 with φ∘k1 = k2 and f2∘φ = f1, or None.

    φ is pinned on k1(A); each lift of a Z-generator may go anywhere in the
    matching fibre of f2 with the same element order.
    """
    if E1.X.order != E2.X.order:
        return None
    p1, p2 = profiles if profiles else (_fiber_profile(E1), _fiber_profile(E2))
    if p1 != p2:
        return None
    A, Z = E1.A, E1.Z
    agens = list(A.generators)
    zgens = list(Z.generators)
    o1, o2 = E1.X.element_orders, E2.X.element_orders
    lifts = [int(np.flatnonzero(E1.f.images == z)[0]) for z in zgens]
    gens = [int(E1.k.images[a]) for a in agens] + lifts
    fixed = [int(E2.k.images[a]) for a in agens]
    cands = [[int(y) for y in np.flatnonzero(E2.f.images == z) if o2[y] == o1[l]]
             for z, l in zip(zgens, lifts)]
    for combo in itertools.product(*cands):
        h = extend_to_hom(E1.X, E2.X, gens, fixed + list(combo))
        if h is not None and h.is_injective():
            return h
    return None


@dataclass
class ExtensionClass:
    representative: Extension
    members: list = field(default_factory=list)     # indices of cocycles
    cocycle: Cocycle2 | None = None
    name: str = ""


@dataclass
class CentrGroup:
    Z: FiniteGroup
    A: FinAbGroup
    classes: list
    table: np.ndarray | None = None
    neutral: int = 0

    @property
    def order(self) -> int:
        return len(self.classes)

    def law_violations(self) -> list[str]:
        t, n, e = self.table, self.order, self.neutral
        out = []
        if not (np.array_equal(t[e], np.arange(n)) and np.array_equal(t[:, e], np.arange(n))):
            out.append("neutral")
        if not np.array_equal(t, t.T):
            out.append("commutative")
        if not all((t[i] == e).any() for i in range(n)):
            out.append("inverse")
        if not all(t[t[a, b], c] == t[a, t[b, c]] for a in range(n) for b in range(n)
                   for c in range(n)):
            out.append("associative")
        return out

    def as_group(self) -> FiniteGroup:
        perm = [self.neutral] + [i for i in range(self.order) if i != self.neutral]
        inv = np.argsort(perm)
        tab = inv[self.table[np.ix_(perm, perm)]]
        return FiniteGroup(tab, name=f"Centr¹({self.Z.name},{self.A.short_name()})")

    def invariants(self) -> tuple:
        return invariant_factors_of_abelian(self.as_group()) if self.order > 1 else ()

    def identify(self, E: Extension) -> int:
        prof = _fiber_profile(E)
        for i, cl in enumerate(self.classes):
            rep = cl.representative
            if find_equivalence(E, rep, (prof, _fiber_profile(rep))) is not None:
                return i
        raise ValueError("extension matches no class")


def _check_cap(Z: Group, A: FinAbGroup, cap: int):
    if Z.order * A.order > cap:
        raise BudgetExceeded(cap, Z.order * A.order, "|A|·|Z| for exhaustive classification")


def classify_centr1(Z: FiniteGroup, A, cap: int = CLASSIFY_CAP, baer: bool = True) -> CentrGroup:
    """Classes of central extensions of Z by A, merged by explicit equivalences."""
    from .corpus import group_name

    A = as_finab(A)
    _check_cap(Z, A, cap)
    classes: list[ExtensionClass] = []
    profs: list = []
    for idx, c in enumerate(normalized_cocycles(Z, A)):
        E = extension_from_cocycle(c, check=False)
        p = _fiber_profile(E)
        for cl, q in zip(classes, profs):
            if find_equivalence(E, cl.representative, (p, q)) is not None:
                cl.members.append(idx)
                break
        else:
            E.label = group_name(E.X)
            classes.append(ExtensionClass(E, [idx], c, E.label))
            profs.append(p)
    G = CentrGroup(Z, A, classes, neutral=0)
    if baer:
        n = len(classes)
        tab = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(i, n):
                s = baer_sum(classes[i].representative, classes[j].representative)
                tab[i, j] = tab[j, i] = G.identify(s)
        G.table = tab
    return G


# ---------------------------------------------------- Baer sum, pushforward

def pushforward(E: Extension, a: GroupHom) -> Extension:
    """Centr¹(Z, a)[E] for a: A -> B, via the cube pushforward."""
    B = a.codomain
    F = E.cube()
    D = direction(F)
    # translate a from A to the direction subgroup k(A) ⊆ X
    kinv = np.full(E.X.order, -1, dtype=np.int64)
    kinv[E.k.images] = np.arange(E.A.order)
    a_dir = GroupHom(D.group, B, a.images[kinv[D.embedding.images]], check=False)
    P = pushforward_cube(F, a_dir, D)
    return Extension(P.top_object, P.pushed_embedding, P.top_map(0), label=E.label)


def baer_sum(E1: Extension, E2: Extension) -> Extension:
    """Product over Z followed by pushforward along the codiagonal A×A -> A."""
    if E1.Z.order != E2.Z.order or E1.A.order != E2.A.order:
        raise PreconditionError("Baer sum needs a common base and direction")
    F = product_over_Z(E1.cube(), E2.cube())
    D = direction(F)
    A = E1.A
    inv1 = np.full(E1.X.order, -1, dtype=np.int64)
    inv1[E1.k.images] = np.arange(A.order)
    inv2 = np.full(E2.X.order, -1, dtype=np.int64)
    inv2[E2.k.images] = np.arange(A.order)
    rows = F.top_object.rows[D.embedding.images]
    vals = np.asarray(A.mul(inv1[rows[:, 0]], inv2[rows[:, 1]]))
    nabla = GroupHom(D.group, A, vals, check=False)
    P = pushforward_cube(F, nabla, D)
    return Extension(P.top_object, P.pushed_embedding, P.top_map(0))


def pushforward_cocycle(c: Cocycle2, a: GroupHom, B: FinAbGroup) -> Cocycle2:
    """a∘f, with B given in invariant-factor form and a landing in B.as_group()."""
    return Cocycle2(c.Z, B, a.images[c.values])


# ------------------------------------------------------------ main check

@dataclass
class MainTheoremReport:
    Z: str
    A: str
    classes: int
    h2: FinAbGroup
    quotient_order: int
    bijective: bool
    additive: bool
    baer_laws: list
    invariants_match: bool
    products: bool | None = None

    @property
    def ok(self) -> bool:
        return (self.classes == self.h2.order == self.quotient_order and self.bijective
                and self.additive and not self.baer_laws and self.invariants_match
                and self.products is not False)


def verify_main_theorem(Z: FiniteGroup, A, cap: int = CLASSIFY_CAP,
                        check_products: bool = True) -> MainTheoremReport:
    A = as_finab(A)
    G = classify_centr1(Z, A, cap)
    h2 = cohomology_group(Z, A, 2)
    Q = cocycle_quotient(Z, A)
    cos = [Q.coset_of(cl.cocycle) for cl in G.classes]
    bij = len(set(cos)) == len(cos) == Q.order
    add = all(cos[G.table[i, j]] == Q.add(cos[i], cos[j])
              for i in range(G.order) for j in range(G.order))
    inv_ok = G.invariants() == h2.invariant_factors == Q.invariants()
    prods = None
    if check_products and A.rank > 1:
        prods = _check_products(Z, A, G, cap)
    return MainTheoremReport(Z.name, str(A), G.order, h2, Q.order, bij, add,
                             G.law_violations(), inv_ok, prods)


def _check_products(Z: FiniteGroup, A: FinAbGroup, G: CentrGroup, cap: int) -> bool:
    """Centr¹(Z, A1×A2) -> Centr¹(Z,A1) × Centr¹(Z,A2) by pushforward is a bijection."""
    d1, rest = A.invariant_factors[0], A.invariant_factors[1:]
    A1, A2 = FinAbGroup((d1,)), FinAbGroup(rest)
    G1 = classify_centr1(Z, A1, cap, baer=False)
    G2 = classify_centr1(Z, A2, cap, baer=False)
    Ag = A.as_group()
    idx = np.arange(Ag.order)
    w = prod(rest)
    p1 = GroupHom(Ag, A1.as_group(), idx // w, check=False)
    p2 = GroupHom(Ag, A2.as_group(), idx % w, check=False)
    seen = set()
    for cl in G.classes:
        E = cl.representative
        pair = (G1.identify(pushforward(E, p1)), G2.identify(pushforward(E, p2)))
        seen.add(pair)
    return len(seen) == G.order == G1.order * G2.order

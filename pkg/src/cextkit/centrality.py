"""Centrality of cubic extensions and the diamond calculus.

A diamond of an n-cubic extension F is a 2^n-tuple (x_I) over F_n with
f_i(x_I) = f_i(x_{I∪{i}}) whenever i ∉ I; the diamonds form the group □.
Dropping entry I gives the punctured diamonds ⊡^I and the projection π^I.

The product decomposition □ ≅ A × ⊡^I is certified through the subgroup D
generated by the degenerate diamonds (those constant along some direction).
When F is central, D is a normal complement of κ_I(A) and the projection
onto A is x ↦ x_I·d_I^-1, where d is the element of D with the same
punctured part as x.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .cubes import CubicExtensionDiagram, direction, kernel_meet, popcount
from .groups import (Group, GroupHom, Subgroup, TupleGroup, abelianize, closure,
                     commuting_witness)
from .limits import DEFAULT_BUDGET, FinDiagram, GrpFunctor, comparison_L, limit


@dataclass
class CentralityReport:
    central: bool
    subset: int | None = None
    witness: tuple | None = None

    def __bool__(self):
        return self.central


def is_H_central(F: CubicExtensionDiagram) -> CentralityReport:
    """[∩_{i∈I}K_i, ∩_{i∉I}K_i] = 1 for every I ⊆ n."""
    X = F.top_object
    for I in range(F.top + 1):
        w = commuting_witness(X, kernel_meet(F, I), kernel_meet(F, F.top & ~I))
        if w is not None:
            return CentralityReport(False, I, (w[0], w[1], int(X.commutator(*w))))
    return CentralityReport(True)


# ------------------------------------------------------------- diamonds

def _membership(F: CubicExtensionDiagram, masks: list[int]):
    """Constraint list over the given entries, for the enumerator."""
    pos = {m: k for k, m in enumerate(masks)}
    maps = [F.top_map(i).images for i in range(F.n)]
    cons = []
    for J in masks:
        for i in range(F.n):
            if J >> i & 1:
                continue
            K = J | (1 << i)
            if K in pos:
                cons.append((pos[J], pos[K], i, i))
    return maps, cons


@dataclass
class DiamondSpace:
    source: CubicExtensionDiagram
    group: TupleGroup

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def rows(self) -> np.ndarray:
        return self.group.rows

    def kappa(self, I: int, a) -> np.ndarray:
        """Index of the diamond with a at entry I and 0 elsewhere."""
        a = np.atleast_1d(np.asarray(a))
        rows = np.zeros((len(a), self.source.top + 1), dtype=np.int64)
        rows[:, I] = a
        return self.group.index_of(rows)


@dataclass
class PuncturedDiamondSpace:
    source: CubicExtensionDiagram
    puncture: int
    masks: list
    group: TupleGroup
    pi: GroupHom | None = None

    @property
    def order(self) -> int:
        return self.group.order


def diamond_space(F: CubicExtensionDiagram, budget: int = DEFAULT_BUDGET) -> DiamondSpace:
    masks = list(range(F.top + 1))
    maps, cons = _membership(F, masks)
    X = F.top_object
    rows = kernels.enumerate_constrained([X.order] * len(masks), maps, cons, budget)
    return DiamondSpace(F, TupleGroup([X] * len(masks), rows, name="□"))


def punctured_space(F: CubicExtensionDiagram, I: int, box: DiamondSpace | None = None,
                    budget: int = DEFAULT_BUDGET) -> PuncturedDiamondSpace:
    """⊡^I enumerated directly, with π^I when the full space is given."""
    masks = [m for m in range(F.top + 1) if m != I]
    maps, cons = _membership(F, masks)
    X = F.top_object
    rows = kernels.enumerate_constrained([X.order] * len(masks), maps, cons, budget)
    P = TupleGroup([X] * len(masks), rows, name=f"⊡^{I:b}")
    pi = None
    if box is not None:
        img = P.index_of(box.rows[:, masks], strict=False)
        if (np.asarray(img) < 0).any():
            raise AssertionError("a diamond does not restrict to a punctured diamond")
        pi = GroupHom(box.group, P, img, check=False)
    return PuncturedDiamondSpace(F, I, masks, P, pi)


def punctured_space_via_limit(F: CubicExtensionDiagram, I: int,
                              budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """⊡^I as the limit of a diagram of spans, returned as entry rows.

    Every present entry J is an object F_n; each edge J to J∪{i} with both
    ends present contributes an object F_{n∖{i}} and the two maps f_i.
    """
    masks = [m for m in range(F.top + 1) if m != I]
    objs = [("e", m) for m in masks]
    groups = {("e", m): F.top_object for m in masks}
    arrows, homs = {}, {}
    for J in masks:
        for i in range(F.n):
            K = J | (1 << i)
            if J >> i & 1 or K == I or K > F.top:
                continue
            mid = ("m", J, i)
            objs.append(mid)
            groups[mid] = F.top_map(i).codomain
            arrows[("l", J, i)] = (("e", J), mid)
            arrows[("r", J, i)] = (("e", K), mid)
            homs[("l", J, i)] = F.top_map(i)
            homs[("r", J, i)] = F.top_map(i)
    shape = FinDiagram(objs, arrows, [])
    res = limit(GrpFunctor(shape, groups, homs, check=False), budget)
    cols = [objs.index(("e", m)) for m in masks]
    return res.apex.rows[:, cols]


def degenerate_mask(F: CubicExtensionDiagram, rows: np.ndarray) -> np.ndarray:
    """Rows constant along at least one direction."""
    out = np.zeros(len(rows), dtype=bool)
    idx = np.arange(F.top + 1)
    for i in range(F.n):
        out |= (rows == rows[:, idx ^ (1 << i)]).all(axis=1)
    return out


def degenerate_subgroup(box: DiamondSpace) -> Subgroup:
    """D: the subgroup of □ generated by all degenerate diamonds."""
    F = box.source
    G = box.group
    idx = np.arange(F.top + 1)
    gens: list[int] = []
    for i in range(F.n):
        sel = np.flatnonzero((G.rows == G.rows[:, idx ^ (1 << i)]).all(axis=1))
        E = Subgroup(G, sel)
        H, inc = E.as_group()
        gens.extend(int(inc(g)) for g in H.generators)
    return Subgroup(G, closure(G, gens))


@dataclass
class DecompositionCertificate:
    ok: bool
    puncture: int
    checks: dict = field(default_factory=dict)
    box: DiamondSpace | None = None
    punctured: PuncturedDiamondSpace | None = None
    D: Subgroup | None = None
    pr_A: np.ndarray | None = None

    def __bool__(self):
        return self.ok


def check_product_decomposition(F: CubicExtensionDiagram, I: int = 0,
                                box: DiamondSpace | None = None,
                                budget: int = DEFAULT_BUDGET) -> DecompositionCertificate:
    """Is π^I: □ -> ⊡^I a product projection with kernel κ_I(A)?

    Checks, in order: A abelian; |□| = |A|·|⊡^I|; D normal in □;
    D ∩ κ_I(A) = 1; |D|·|A| = |□|.  On success the certificate carries
    pr_A as an array over □ (values are elements of F_n).
    """
    box = box or diamond_space(F, budget)
    A = direction(F)
    P = punctured_space(F, I, box, budget)
    checks = {"abelian": A.abelian}
    checks["count"] = box.order == A.order * P.order
    cert = DecompositionCertificate(False, I, checks, box, P)
    if not all(checks.values()):
        return cert
    D = degenerate_subgroup(box)
    cert.D = D
    checks["D_normal"] = D.is_normal()
    kap = box.kappa(I, A.subgroup.elements)
    checks["D_meets_kappa_trivially"] = int(D.mask[kap].sum()) == 1
    checks["D_complement"] = D.order * A.order == box.order
    if not all(checks.values()):
        return cert
    cert.pr_A = _projection(F, box, P, D, I)
    cert.ok = True
    return cert


def _projection(F, box: DiamondSpace, P: PuncturedDiamondSpace, D: Subgroup, I: int):
    X = F.top_object
    rows = box.rows
    d_rows = rows[D.elements]
    # D maps bijectively onto ⊡^I; look up the D-element over each fibre
    d_of = np.full(P.order, -1, dtype=np.int64)
    d_of[P.pi.images[D.elements]] = D.elements
    if (d_of < 0).any():
        raise AssertionError("D does not cover the punctured space")
    d = d_of[P.pi.images]
    return np.asarray(X.mul(rows[:, I], X.inv(rows[d, I])), dtype=np.int64)


def pr_A(cert: DecompositionCertificate, x) -> int:
    """pr_A of a diamond (index in □ or a full row)."""
    if not cert.ok:
        raise ValueError("no product decomposition")
    if np.ndim(x) == 0:
        return int(cert.pr_A[int(x)])
    return int(cert.pr_A[cert.box.group.index_of(np.asarray(x))])


def pr_A_altsum(F: CubicExtensionDiagram, rows, ab=None) -> np.ndarray:
    """Σ_J (-1)^{|J|} η(x_J) in ab(F_n), for each diamond row."""
    if ab is None:
        ab = abelianize(F.top_object)
    Q, eta = ab
    rows = np.atleast_2d(np.asarray(rows))
    acc = np.zeros(len(rows), dtype=np.int64)
    for J in range(F.top + 1):
        v = eta.images[rows[:, J]]
        if popcount(J) % 2:
            v = Q.inverse[v]
        acc = Q.table[acc, v]
    return acc


def sign_profile(F: CubicExtensionDiagram, I: int, cert: DecompositionCertificate | None = None):
    """How η∘pr_A at puncture I relates to the alternating sum.

    Returns +1 if they agree, -1 if they differ by a sign everywhere, 0 if
    neither (or both, when the values are all 2-torsion it reports +1).
    """
    cert = cert or check_product_decomposition(F, I)
    if not cert.ok:
        return None
    Q, eta = ab = abelianize(F.top_object)
    alt = pr_A_altsum(F, cert.box.rows, ab)
    pa = eta.images[cert.pr_A]
    if np.array_equal(pa, alt):
        return 1
    if np.array_equal(pa, Q.inverse[alt]):
        return -1
    return 0


# ---------------------------------------------------- Mal'tsev operations

class MaltsevOperation:
    """p^I: complete a punctured diamond so that its A-projection is 0."""

    def __init__(self, F: CubicExtensionDiagram, I: int = 0,
                 cert: DecompositionCertificate | None = None):
        cert = cert or check_product_decomposition(F, I)
        if not cert.ok:
            raise ValueError("F has no product decomposition at this puncture")
        self.F, self.I, self.cert = F, I, cert
        P = cert.punctured
        box = cert.box
        self.table = np.full(P.order, -1, dtype=np.int64)
        D = cert.D.elements
        self.table[P.pi.images[D]] = box.rows[D, I]

    def __call__(self, entries: dict) -> int:
        """``entries`` maps every mask other than I to an element of F_n."""
        P = self.cert.punctured
        row = [int(entries[m]) for m in P.masks]
        k = P.group.index_of(np.array(row), strict=False)
        if k < 0:
            raise ValueError("not a punctured diamond")
        return int(self.table[k])


def maltsev_op(F: CubicExtensionDiagram, I: int, y: dict,
               op: MaltsevOperation | None = None) -> int:
    op = op or MaltsevOperation(F, I)
    return op(y)


def p2(op: MaltsevOperation, alpha, beta, gamma) -> int:
    """p^∅(α, β, γ) for n = 2, with α at {0}, β at {0,1}, γ at {1}."""
    return op({0b01: alpha, 0b11: beta, 0b10: gamma})


def p3(op: MaltsevOperation, a, b, c, d, alpha, beta, gamma) -> int:
    """p^∅ for n = 3 in the labelling a={0,2}, b={0,1,2}, c={1,2}, d={2},
    α={0}, β={0,1}, γ={1}."""
    return op({0b101: a, 0b111: b, 0b110: c, 0b100: d,
               0b001: alpha, 0b011: beta, 0b010: gamma})


# ------------------------------------------------------- pullback lemma

def diamond_pullback_holds(F: CubicExtensionDiagram, I: int, box: DiamondSpace | None = None,
                           budget: int = DEFAULT_BUDGET) -> bool:
    """□ ≅ F_n ×_{LF} ⊡^I via x ↦ (x_I, π^I x).

    F_n maps to L F by l_F, and ⊡^I by y ↦ (f_i(y_{I⊕{i}}))_i.
    """
    box = box or diamond_space(F, budget)
    P = punctured_space(F, I, box, budget)
    L, l = comparison_L(F, method="direct", budget=budget)
    Lg = L.apex
    pos = {m: k for k, m in enumerate(P.masks)}
    cols = [F.top_map(i).images[P.group.rows[:, pos[I ^ (1 << i)]]] for i in range(F.n)]
    phi = Lg.index_of(np.stack(cols, axis=1), strict=False)
    if (np.asarray(phi) < 0).any():
        return False
    pb = kernels.enumerate_constrained([F.top_object.order, P.order],
                                       [l.images, np.asarray(phi)], [(0, 1, 0, 1)], budget)
    if len(pb) != box.order:
        return False
    pairs = np.stack([box.rows[:, I], P.pi.images], axis=1)
    return len(np.unique(pairs, axis=0)) == box.order

"""Finite abelian groups and exact integer linear algebra.

Integers are Python ints throughout, so nothing overflows.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, prod
from typing import Sequence

import numpy as np

MAX_DIM = 8192


class NotAComplex(ValueError):
    pass


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        c = cols if cols is not None else (len(rows[0]) if rows else 0)
        for r in rows:
            if len(r) != c:
                raise ValueError("ragged matrix")
        if len(rows) > MAX_DIM or c > MAX_DIM:
            raise ValueError("matrix dimension cap exceeded")
        return cls(len(rows), c, tuple(rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diag(cls, values: Sequence[int], rows: int | None = None,
             cols: int | None = None) -> "IntMatrix":
        r = len(values) if rows is None else rows
        c = len(values) if cols is None else cols
        return cls(r, c, tuple(tuple(int(values[i]) if i == j and i < len(values) else 0
                                     for j in range(c)) for i in range(r)))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix(self.rows, other.cols, tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.entries))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows
                         else tuple(() for _ in range(self.cols)))

    def is_diagonal(self) -> bool:
        return all(v == 0 for i, r in enumerate(self.entries) for j, v in enumerate(r) if i != j)

    def diagonal(self) -> list[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def det(self) -> int:
        """Exact determinant by fraction-free elimination."""
        if self.rows != self.cols:
            raise ValueError("not square")
        n = self.rows
        a = self.tolist()
        sign = 1
        prev = 1
        for k in range(n):
            p = next((i for i in range(k, n) if a[i][k] != 0), None)
            if p is None:
                return 0
            if p != k:
                a[k], a[p] = a[p], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.det()) == 1


def smith_normal_form(M: IntMatrix, with_inverse: bool = False):
    """Return (U, D, V) with U·M·V = D, U and V unimodular.

    D is diagonal with non-negative entries d_1 | d_2 | ... followed by
    zeros.  With ``with_inverse`` the inverse of V is returned as a fourth
    value.
    """
    r, c = M.rows, M.cols
    A = M.tolist()
    U = [[int(i == j) for j in range(r)] for i in range(r)]
    V = [[int(i == j) for j in range(c)] for i in range(c)]
    Vi = [[int(i == j) for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):  # row dst += q row src
        if q:
            rs, rd = A[src], A[dst]
            for k in range(c):
                if rs[k]:
                    rd[k] += q * rs[k]
            us, ud = U[src], U[dst]
            for k in range(r):
                if us[k]:
                    ud[k] += q * us[k]

    def add_col(dst, src, q):  # col dst += q col src
        if q:
            for row in A:
                if row[src]:
                    row[dst] += q * row[src]
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]
            vd, vs = Vi[dst], Vi[src]
            for k in range(c):
                if vd[k]:
                    vs[k] -= q * vd[k]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            row = A[i]
            for j in range(t, c):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = A[t][t]
            moved = False
            for i in range(t + 1, r):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        swap_rows(i, t)
                        moved = True
                        break
            if moved:
                continue
            for j in range(t + 1, c):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        swap_cols(j, t)
                        moved = True
                        break
            if moved:
                continue
            bad = None
            for i in range(t + 1, r):
                row = A[i]
                for j in range(t + 1, c):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    out = (IntMatrix.from_rows(U, r), IntMatrix.from_rows(A, c), IntMatrix.from_rows(V, c))
    if with_inverse:
        return out + (IntMatrix.from_rows(Vi, c),)
    return out


def invariant_factors_from_diagonal(values: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Torsion invariant factors and free rank of Z^k / diag(values)."""
    if not values:
        return (), 0
    _, D, _ = smith_normal_form(IntMatrix.diag(list(values)))
    diag = D.diagonal()
    free = sum(1 for d in diag if d == 0)
    return tuple(d for d in diag if d > 1), free


@dataclass(frozen=True)
class FinAbGroup:
    invariant_factors: tuple = ()

    def __post_init__(self):
        f = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        for i, d in enumerate(f):
            if d < 2:
                raise ValueError("invariant factors must be at least 2")
            if i and d % f[i - 1]:
                raise ValueError("invariant factors must form a divisibility chain")

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> "FinAbGroup":
        """Normalise a product of cyclic groups of the given orders."""
        facs, free = invariant_factors_from_diagonal([o for o in orders if o != 1])
        if free:
            raise ValueError("infinite cyclic factor")
        return cls(facs)

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def elements(self):
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def normalize(self, x: Sequence[int]) -> tuple:
        return tuple(int(v) % d for v, d in zip(x, self.invariant_factors))

    def add(self, x, y) -> tuple:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def neg(self, x) -> tuple:
        return tuple((-a) % d for a, d in zip(x, self.invariant_factors))

    def scale(self, k: int, x) -> tuple:
        return tuple((k * a) % d for a, d in zip(x, self.invariant_factors))

    def zero(self) -> tuple:
        return (0,) * self.rank

    def index(self, x: Sequence[int]) -> int:
        i = 0
        for v, d in zip(x, self.invariant_factors):
            i = i * d + (int(v) % d)
        return i

    def coords(self, i: int) -> tuple:
        out = []
        for d in reversed(self.invariant_factors):
            out.append(i % d)
            i //= d
        return tuple(reversed(out))

    def as_group(self, name: str | None = None):
        """The Cayley-table group, with element index equal to ``index``."""
        from .groups import abelian_group, cyclic
        if not self.invariant_factors:
            return cyclic(1, name=name or "C1")
        return abelian_group(self.invariant_factors, name=name or self.short_name())

    def short_name(self) -> str:
        if not self.invariant_factors:
            return "C1"
        return "×".join(f"C{d}" for d in self.invariant_factors)

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " ⊕ ".join(f"Z/{d}" for d in self.invariant_factors)


@dataclass(frozen=True)
class AbHom:
    domain: FinAbGroup
    codomain: FinAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        M = self.matrix
        if M.rows != self.codomain.rank or M.cols != self.domain.rank:
            raise ValueError("matrix shape does not match the groups")
        cf = self.codomain.invariant_factors
        for j, d in enumerate(self.domain.invariant_factors):
            for i in range(M.rows):
                if (M[i, j] * d) % cf[i]:
                    raise ValueError("matrix is not well defined on the domain")

    def __call__(self, x: Sequence[int]) -> tuple:
        M = self.matrix
        return self.codomain.normalize(
            [sum(M[i, j] * x[j] for j in range(M.cols)) for i in range(M.rows)])

    def compose(self, first: "AbHom") -> "AbHom":
        return AbHom(first.domain, self.codomain, self.matrix @ first.matrix)

    def is_zero(self) -> bool:
        cf = self.codomain.invariant_factors
        return all(self.matrix[i, j] % cf[i] == 0
                   for i in range(self.matrix.rows) for j in range(self.matrix.cols))

    @classmethod
    def zero(cls, domain: FinAbGroup, codomain: FinAbGroup) -> "AbHom":
        return cls(domain, codomain, IntMatrix.zeros(codomain.rank, domain.rank))


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def homology_at(complex_: Sequence[AbHom], k: int) -> FinAbGroup:
    """ker(h_k) / im(h_{k-1}) at the k-th group C_k of C_0 -> C_1 -> ...

    The maps are ``complex_[i]: C_i -> C_{i+1}``; positions with no
    incoming or outgoing map use the zero map.
    """
    groups = [h.domain for h in complex_] + ([complex_[-1].codomain] if complex_ else [])
    if not complex_:
        raise ValueError("empty complex")
    for i in range(len(complex_) - 1):
        if complex_[i + 1].domain != complex_[i].codomain:
            raise NotAComplex(f"maps {i} and {i + 1} do not compose")
        if not complex_[i + 1].compose(complex_[i]).is_zero():
            raise NotAComplex(f"maps {i} and {i + 1} compose to a non-zero map")
    if not 0 <= k < len(groups):
        raise IndexError("position out of range")
    C = groups[k]
    m = C.rank
    if m == 0:
        return FinAbGroup(())
    d = C.invariant_factors
    out_h = complex_[k] if k < len(complex_) else None
    in_h = complex_[k - 1] if k > 0 else None

    # kernel lattice K = {x in Z^m : h x in diag(d') Z^m'} = V diag(c) Z^m
    if out_h is not None and out_h.codomain.rank:
        dp = out_h.codomain.invariant_factors
        L = _lcm(dp)
        scaled = IntMatrix.from_rows(
            [[v * (L // dp[i]) for v in row] for i, row in enumerate(out_h.matrix.entries)], m)
        _, D, V, Vinv = smith_normal_form(scaled, with_inverse=True)
        diag = D.diagonal() + [0] * (m - min(D.rows, D.cols))
        cvec = [L // gcd(L, x) if x else 1 for x in diag[:m]]
    else:
        V = Vinv = IntMatrix.identity(m)
        cvec = [1] * m
    # generators of the image lattice plus the relations diag(d)
    gens = []
    if in_h is not None:
        gens.extend(list(col) for col in in_h.matrix.transpose().entries)
    for i in range(m):
        gens.append([d[i] if j == i else 0 for j in range(m)])
    # coordinates in the basis V diag(c): diag(1/c) Vinv g
    coords_rows = []
    Vi = Vinv.entries
    for i in range(m):
        row = []
        for g in gens:
            s = sum(Vi[i][j] * g[j] for j in range(m))
            if s % cvec[i]:
                raise NotAComplex("image is not contained in the kernel")
            row.append(s // cvec[i])
        coords_rows.append(row)
    _, D2, _ = smith_normal_form(IntMatrix.from_rows(coords_rows, len(gens)))
    diag2 = D2.diagonal() + [0] * (m - min(D2.rows, D2.cols))
    if any(x == 0 for x in diag2[:m]):
        raise ValueError("homology has a free part")
    return FinAbGroup(tuple(x for x in diag2[:m] if x > 1))


def divisor_chains(n: int, lo: int = 2):
    """Divisibility chains d_1 | d_2 | ... with product n and d_1 >= lo."""
    if n == 1:
        yield ()
        return
    for d in range(lo, n + 1):
        if n % d:
            continue
        rest = n // d
        if rest == 1:
            yield (d,)
            continue
        for tail in divisor_chains(rest, d):
            if tail and tail[0] % d == 0:
                yield (d,) + tail


def factor_counts_to_invariants(n: int, counts: dict[int, int]) -> tuple[int, ...]:
    """Invariant factors of an abelian group of order n.

    ``counts[d]`` is the number of elements x with d·x = 0, for every d | n.
    """
    for chain in divisor_chains(n):
        if all(prod(gcd(d, f) for f in chain) == c for d, c in counts.items()):
            return chain
    raise ValueError("counts do not describe an abelian group")


def hom_matrix_from_images(domain: FinAbGroup, codomain: FinAbGroup,
                           images: Sequence[Sequence[int]]) -> AbHom:
    """The AbHom sending the i-th generator to images[i]."""
    rows = [[int(images[j][i]) for j in range(domain.rank)] for i in range(codomain.rank)]
    return AbHom(domain, codomain, IntMatrix.from_rows(rows, domain.rank))


def random_unimodular(n: int, rng: np.random.Generator, steps: int = 6) -> IntMatrix:
    """Product of random elementary matrices."""
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        if n < 2:
            break
        i, j = rng.choice(n, 2, replace=False)
        q = int(rng.integers(-2, 3))
        for k in range(n):
            M[i][k] += q * M[j][k]
        if rng.random() < 0.3:
            M[i], M[j] = M[j], M[i]
    return IntMatrix.from_rows(M, n)

"""Pure-Python versions of the hot loops.

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and the same output, including output order.
"""
import numpy as np

from .errors import BudgetExceeded


def closure(table, gens):
    """Elements of the subgroup generated by ``gens``, sorted."""
    rows = table.tolist() if hasattr(table, "tolist") else table
    gens = [int(g) for g in gens if g != 0]
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for e in frontier:
            row = rows[e]
            for g in gens:
                p = row[g]
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return np.array(sorted(seen), dtype=np.int64)


def associativity_witness(table):
    """First triple violating associativity, or None."""
    rows = table.tolist()
    n = len(rows)
    for a in range(n):
        ra = rows[a]
        for b in range(n):
            ab = rows[ra[b]]
            rb = rows[b]
            for c in range(n):
                if ab[c] != ra[rb[c]]:
                    return (a, b, c)
    return None


def hom_witness(dom_table, cod_table, images):
    """First pair (a, b) with images[ab] != images[a]images[b], or None."""
    d = dom_table.tolist()
    c = cod_table.tolist()
    im = images.tolist()
    n = len(d)
    for a in range(n):
        da = d[a]
        ca = c[im[a]]
        for b in range(n):
            if im[da[b]] != ca[im[b]]:
                return (a, b)
    return None


def _prepare(sizes, maps, constraints):
    nv = len(sizes)
    gen = [None] * nv
    checks = [[] for _ in range(nv)]
    for a, b, ma, mb in constraints:
        if a > b:
            a, b, ma, mb = b, a, mb, ma
        if a < b and gen[b] is None:
            gen[b] = (a, ma, mb)
        else:
            checks[b].append((a, ma, mb))
    fibers = {}
    for g in gen:
        if g is not None and g[2] not in fibers:
            fib = {}
            for x, v in enumerate(maps[g[2]]):
                fib.setdefault(int(v), []).append(x)
            fibers[g[2]] = fib
    return gen, checks, fibers


def enumerate_constrained(sizes, maps, constraints, cap):
    """All assignments x with maps[ma][x[a]] == maps[mb][x[b]] per constraint.

    Variables are assigned in index order; each variable draws its candidates
    from the fiber selected by its first constraint with an earlier variable,
    so the output is in lexicographic order of the assignment tuples.
    """
    sizes = [int(s) for s in sizes]
    nv = len(sizes)
    maps = [np.asarray(m).tolist() for m in maps]
    gen, checks, fibers = _prepare(sizes, maps, constraints)
    out = []
    x = [0] * nv
    nodes = 0
    if nv == 0:
        return np.zeros((1, 0), dtype=np.int64)

    def rec(b):
        nonlocal nodes
        g = gen[b]
        if g is None:
            cands = range(sizes[b])
        else:
            a, ma, mb = g
            cands = fibers[mb].get(maps[ma][x[a]], ())
        for v in cands:
            nodes += 1
            if nodes > cap:
                raise BudgetExceeded(cap, nodes)
            ok = True
            for a, ma, mb in checks[b]:
                left = maps[ma][v if a == b else x[a]]
                if left != maps[mb][v]:
                    ok = False
                    break
            if not ok:
                continue
            x[b] = v
            if b + 1 == nv:
                out.append(tuple(x))
            else:
                rec(b + 1)

    rec(0)
    if not out:
        return np.zeros((0, nv), dtype=np.int64)
    return np.array(out, dtype=np.int64)

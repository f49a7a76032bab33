# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the loops in ``_kernels_py``."""
import numpy as np
cimport numpy as cnp

from .errors import BudgetExceeded

ctypedef cnp.int64_t i64


def closure(table, gens):
    cdef i64[:, :] t = np.ascontiguousarray(table, dtype=np.int64)
    cdef Py_ssize_t n = t.shape[0]
    cdef i64[:] g = np.array([x for x in gens if x != 0], dtype=np.int64)
    cdef Py_ssize_t ng = g.shape[0]
    cdef cnp.uint8_t[:] seen = np.zeros(n, dtype=np.uint8)
    cdef i64[:] queue = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t head = 0, tail = 1, j
    cdef i64 e, p
    queue[0] = 0
    seen[0] = 1
    while head < tail:
        e = queue[head]
        head += 1
        for j in range(ng):
            p = t[e, g[j]]
            if not seen[p]:
                seen[p] = 1
                queue[tail] = p
                tail += 1
    return np.flatnonzero(np.asarray(seen)).astype(np.int64)


def associativity_witness(table):
    cdef i64[:, :] t = np.ascontiguousarray(table, dtype=np.int64)
    cdef Py_ssize_t n = t.shape[0], a, b, c
    cdef i64 ab
    for a in range(n):
        for b in range(n):
            ab = t[a, b]
            for c in range(n):
                if t[ab, c] != t[a, t[b, c]]:
                    return (a, b, c)
    return None


def hom_witness(dom_table, cod_table, images):
    cdef i64[:, :] d = np.ascontiguousarray(dom_table, dtype=np.int64)
    cdef i64[:, :] c = np.ascontiguousarray(cod_table, dtype=np.int64)
    cdef i64[:] im = np.ascontiguousarray(images, dtype=np.int64)
    cdef Py_ssize_t n = d.shape[0], a, b
    for a in range(n):
        for b in range(n):
            if im[d[a, b]] != c[im[a], im[b]]:
                return (a, b)
    return None


def _flatten(arrays):
    offs = np.zeros(len(arrays) + 1, dtype=np.int64)
    for k, arr in enumerate(arrays):
        offs[k + 1] = offs[k] + len(arr)
    if arrays:
        data = np.concatenate([np.asarray(a, dtype=np.int64) for a in arrays])
    else:
        data = np.zeros(0, dtype=np.int64)
    return data, offs


def _prepare(sizes, maps, constraints):
    nv = len(sizes)
    gen_py = [None] * nv
    checks_py = [[] for _ in range(nv)]
    for a, b, ma, mb in constraints:
        if a > b:
            a, b, ma, mb = b, a, mb, ma
        if a < b and gen_py[b] is None:
            gen_py[b] = (a, ma, mb)
        else:
            checks_py[b].append((a, ma, mb))
    mapdata, mapoff = _flatten([np.asarray(m, dtype=np.int64) for m in maps])
    # fiber index (stable sort by value) for every map used as a generator
    nm = len(maps)
    order_list = []
    vs_list = []
    vmax_np = np.full(nm, -1, dtype=np.int64)
    used = {g[2] for g in gen_py if g is not None}
    for m in range(nm):
        arr = np.asarray(maps[m], dtype=np.int64)
        if m in used and len(arr):
            vmax = int(arr.max())
            vmax_np[m] = vmax
            order_list.append(np.argsort(arr, kind="stable").astype(np.int64))
            counts = np.bincount(arr, minlength=vmax + 1)
            vs = np.zeros(vmax + 2, dtype=np.int64)
            vs[1:] = np.cumsum(counts)
            vs_list.append(vs)
        else:
            order_list.append(np.zeros(0, dtype=np.int64))
            vs_list.append(np.zeros(1, dtype=np.int64))
    ford, ford_off = _flatten(order_list)
    fvs, fvs_off = _flatten(vs_list)
    ga = np.full(nv, -1, dtype=np.int64)
    gma = np.zeros(nv, dtype=np.int64)
    gmb = np.zeros(nv, dtype=np.int64)
    for b in range(nv):
        if gen_py[b] is not None:
            ga[b], gma[b], gmb[b] = gen_py[b]
    chk_flat = [c for b in range(nv) for c in checks_py[b]]
    chk_off = np.zeros(nv + 1, dtype=np.int64)
    for b in range(nv):
        chk_off[b + 1] = chk_off[b] + len(checks_py[b])
    chk = np.array(chk_flat, dtype=np.int64).reshape(-1, 3)
    return (mapdata, mapoff, ford, ford_off, fvs, fvs_off, vmax_np,
            ga, gma, gmb, chk_off, chk)


def enumerate_constrained(sizes, maps, constraints, cap):
    cdef Py_ssize_t nv = len(sizes)
    if nv == 0:
        return np.zeros((1, 0), dtype=np.int64)
    prep = _prepare(sizes, maps, constraints)
    cdef i64[:] mapdata = prep[0]
    cdef i64[:] mapoff = prep[1]
    cdef i64[:] ford = prep[2]
    cdef i64[:] ford_off = prep[3]
    cdef i64[:] fvs = prep[4]
    cdef i64[:] fvs_off = prep[5]
    cdef i64[:] vmaxv = prep[6]
    cdef i64[:] ga = prep[7]
    cdef i64[:] gma = prep[8]
    cdef i64[:] gmb = prep[9]
    cdef i64[:] chk_off = prep[10]
    cdef i64[:, :] chk = prep[11]
    cdef i64[:] size = np.asarray(sizes, dtype=np.int64)

    cdef i64[:] x = np.zeros(nv, dtype=np.int64)
    cdef i64[:] pos = np.zeros(nv, dtype=np.int64)
    cdef i64[:] hi = np.zeros(nv, dtype=np.int64)
    cdef i64[:] base = np.zeros(nv, dtype=np.int64)
    cdef cnp.uint8_t[:] is_fiber = np.zeros(nv, dtype=np.uint8)

    cdef Py_ssize_t cap_rows = 1024, nrows = 0
    out_np = np.empty((cap_rows, nv), dtype=np.int64)
    cdef i64[:, :] out = out_np
    cdef long long nodes = 0
    cdef long long ccap = cap
    cdef Py_ssize_t level = 0, k, j
    cdef i64 v, cand, a, ma, mb, left
    cdef bint ok

    # set up level 0
    level = 0
    while True:
        # initialise candidates for `level`
        if ga[level] < 0:
            is_fiber[level] = 0
            pos[level] = 0
            hi[level] = size[level]
        else:
            is_fiber[level] = 1
            a = ga[level]
            ma = gma[level]
            mb = gmb[level]
            v = mapdata[mapoff[ma] + x[a]]
            if v < 0 or v > vmaxv[mb]:
                pos[level] = 0
                hi[level] = 0
            else:
                pos[level] = fvs[fvs_off[mb] + v]
                hi[level] = fvs[fvs_off[mb] + v + 1]
                base[level] = ford_off[mb]
        # iterate
        while True:
            if pos[level] >= hi[level]:
                if level == 0:
                    return out_np[:nrows].copy()
                level -= 1
                continue
            if is_fiber[level]:
                cand = ford[base[level] + pos[level]]
            else:
                cand = pos[level]
            pos[level] += 1
            nodes += 1
            if nodes > ccap:
                raise BudgetExceeded(cap, nodes)
            ok = True
            for k in range(chk_off[level], chk_off[level + 1]):
                a = chk[k, 0]
                ma = chk[k, 1]
                mb = chk[k, 2]
                if a == level:
                    left = mapdata[mapoff[ma] + cand]
                else:
                    left = mapdata[mapoff[ma] + x[a]]
                if left != mapdata[mapoff[mb] + cand]:
                    ok = False
                    break
            if not ok:
                continue
            x[level] = cand
            if level == nv - 1:
                if nrows == cap_rows:
                    cap_rows *= 2
                    out_np = np.resize(out_np, (cap_rows, nv))
                    out = out_np
                for j in range(nv):
                    out[nrows, j] = x[j]
                nrows += 1
                continue
            level += 1
            break

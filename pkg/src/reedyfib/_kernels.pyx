# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled backtracking kernel; mirrors ``_search.solve`` exactly."""

from libcpp.vector cimport vector

import numpy as np


cdef inline long slot_value(long s, long[::1] vals, long[::1] slot_src, long[::1] chain_ptr,
                            long[::1] chain_dir, long[::1] chain_idx, long[::1] degen,
                            long M, long NY) noexcept nogil:
    cdef long g = vals[slot_src[s]]
    cdef long c
    for c in range(chain_ptr[s], chain_ptr[s + 1]):
        g = degen[(chain_dir[c] * M + chain_idx[c]) * NY + g]
    return g


def solve(long nvars, var_off, var_cnt, fixed, req, qproj,
          slot_ptr, slot_j, slot_i, slot_src, chain_ptr, chain_dir, chain_idx,
          face, degen, long M, long NY, cand_ptr, cand_items, long limit):
    if nvars == 0:
        return [[]]
    cdef long[::1] voff = np.ascontiguousarray(var_off, dtype=np.int_)
    cdef long[::1] vcnt = np.ascontiguousarray(var_cnt, dtype=np.int_)
    cdef long[::1] fx = np.ascontiguousarray(fixed, dtype=np.int_)
    cdef long[::1] rq = np.ascontiguousarray(req, dtype=np.int_)
    cdef long[::1] qp = np.ascontiguousarray(qproj if len(qproj) else [0], dtype=np.int_)
    cdef long[::1] sp = np.ascontiguousarray(slot_ptr, dtype=np.int_)
    cdef long[::1] sj = np.ascontiguousarray(slot_j if len(slot_j) else [0], dtype=np.int_)
    cdef long[::1] si = np.ascontiguousarray(slot_i if len(slot_i) else [0], dtype=np.int_)
    cdef long[::1] ss = np.ascontiguousarray(slot_src if len(slot_src) else [0], dtype=np.int_)
    cdef long[::1] cp = np.ascontiguousarray(chain_ptr, dtype=np.int_)
    cdef long[::1] cd = np.ascontiguousarray(chain_dir if len(chain_dir) else [0], dtype=np.int_)
    cdef long[::1] ci = np.ascontiguousarray(chain_idx if len(chain_idx) else [0], dtype=np.int_)
    cdef long[::1] fa = np.ascontiguousarray(face if len(face) else [0], dtype=np.int_)
    cdef long[::1] dg = np.ascontiguousarray(degen if len(degen) else [0], dtype=np.int_)
    cdef long[::1] cpt = np.ascontiguousarray(cand_ptr if len(cand_ptr) else [0], dtype=np.int_)
    cdef long[::1] cit = np.ascontiguousarray(cand_items if len(cand_items) else [0], dtype=np.int_)
    cdef long[::1] vals = np.full(nvars, -1, dtype=np.int_)
    cdef long[::1] lo = np.zeros(nvars, dtype=np.int_)
    cdef long[::1] hi = np.zeros(nvars, dtype=np.int_)
    cdef long[::1] pos = np.zeros(nvars, dtype=np.int_)
    cdef char[::1] mode = np.zeros(nvars, dtype=np.int8)   # 0 unset, 1 range, 2 csr, 3 fixed
    cdef vector[long] found
    cdef long nfound = 0
    cdef long v = 0, k, g, s, f, base, t
    cdef bint good
    with nogil:
        while v >= 0:
            if v == nvars:
                for t in range(nvars):
                    found.push_back(vals[t])
                nfound += 1
                if limit >= 0 and nfound >= limit:
                    break
                v -= 1
                continue
            if mode[v] == 0:
                if fx[v] >= 0:
                    mode[v] = 3
                    lo[v] = 0
                    hi[v] = 1
                elif sp[v] < sp[v + 1]:
                    s = sp[v]
                    f = slot_value(s, vals, ss, cp, cd, ci, dg, M, NY)
                    base = (sj[s] * M + si[s]) * (NY + 1)
                    mode[v] = 2
                    lo[v] = cpt[base + f]
                    hi[v] = cpt[base + f + 1]
                else:
                    mode[v] = 1
                    lo[v] = voff[v]
                    hi[v] = voff[v] + vcnt[v]
                pos[v] = lo[v]
            k = pos[v]
            good = False
            while k < hi[v]:
                if mode[v] == 3:
                    g = fx[v]
                elif mode[v] == 2:
                    g = cit[k]
                else:
                    g = k
                k += 1
                if rq[v] >= 0 and qp[g] != rq[v]:
                    continue
                good = True
                for s in range(sp[v], sp[v + 1]):
                    if fa[(sj[s] * M + si[s]) * NY + g] != slot_value(s, vals, ss, cp, cd, ci, dg, M, NY):
                        good = False
                        break
                if good:
                    vals[v] = g
                    break
            pos[v] = k
            if good:
                v += 1
                if v < nvars:
                    mode[v] = 0
            else:
                vals[v] = -1
                mode[v] = 0
                v -= 1
    out = []
    cdef long r
    for r in range(nfound):
        out.append([found[r * nvars + t] for t in range(nvars)])
    return out

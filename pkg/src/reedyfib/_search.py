"""Pure-Python backtracking kernel for map enumeration.

Works on the flat arrays prepared by :mod:`reedyfib.search`; the compiled
kernel in ``_kernels`` has the same signature and visits candidates in the
same order, so both return identical solution lists.
"""


def solve(nvars, var_off, var_cnt, fixed, req, qproj,
          slot_ptr, slot_j, slot_i, slot_src, chain_ptr, chain_dir, chain_idx,
          face, degen, M, NY, cand_ptr, cand_items, limit):
    vals = [-1] * nvars
    out = []

    def slot_value(s):
        g = vals[slot_src[s]]
        for c in range(chain_ptr[s], chain_ptr[s + 1]):
            g = degen[(chain_dir[c] * M + chain_idx[c]) * NY + g]
        return g

    def ok(v, g):
        if req[v] >= 0 and qproj[g] != req[v]:
            return False
        for s in range(slot_ptr[v], slot_ptr[v + 1]):
            if face[(slot_j[s] * M + slot_i[s]) * NY + g] != slot_value(s):
                return False
        return True

    if nvars == 0:
        return [[]]
    cands = [None] * nvars
    pos = [0] * nvars
    v = 0
    while v >= 0:
        if v == nvars:
            out.append(list(vals))
            if 0 <= limit <= len(out):
                break
            v -= 1
            continue
        cs = cands[v]
        if cs is None:
            if fixed[v] >= 0:
                cs = (fixed[v],)
            elif slot_ptr[v] < slot_ptr[v + 1]:
                s = slot_ptr[v]
                f = slot_value(s)
                base = (slot_j[s] * M + slot_i[s]) * (NY + 1)
                cs = cand_items[cand_ptr[base + f]:cand_ptr[base + f + 1]]
            else:
                cs = range(var_off[v], var_off[v] + var_cnt[v])
            cands[v] = cs
            pos[v] = 0
        k = pos[v]
        n = len(cs)
        while k < n and not ok(v, cs[k]):
            k += 1
        if k < n:
            vals[v] = cs[k]
            pos[v] = k + 1
            v += 1
            if v < nvars:
                cands[v] = None
        else:
            vals[v] = -1
            cands[v] = None
            v -= 1
    return out

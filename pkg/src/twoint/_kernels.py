"""Numba kernels for the exact 0-1 orbit search.

The search state is a trail-based constraint store over the s x s quotient
matrix (s = 52 for q = 3):

  * S[j]        current column sum of the chosen rows,
  * cnt[j][v]   how many still-selectable rows have entry v in column j,
  * cstat[j]    0 free / 1 locked to h1 / 2 locked to h2,
  * slack[j]    (current max admissible target) - S[j],
  * rstat[i]    0 open, 1 chosen, 2 branched to 0, 3 propagated to 0.

Propagation alternates two passes to a fixpoint: exact cardinality-aware
column bounds (cheapest vs. costliest sum of rem entries) that lock or fail
columns, and bucket-driven row elimination (a row dies as soon as one of its
entries exceeds a column's slack).  Counting locked columns against the
exact hyperplane-type counts t1/7 and t2/7 prunes further.

Symmetry is broken in-tree.  Branching follows ascending orbit index, so the
chosen set C only ever grows past its maximum; whenever some normalizer
element g with g(z) = 0 for a z already chosen satisfies
sorted(g(C)) < sorted(C), every completion of the node is dominated by a
subtree explored earlier, and the node dies.  Complete solutions pass an
exact minimal-image test over the whole group, so only lex-leader
representatives are emitted.
"""

import numpy as np
from numba import njit

TRAIL_ROW_ZERO = 0     # row removed from the open pool (branched or killed)
TRAIL_ROW_ONE = 1      # row chosen
TRAIL_COL_LOCK = 2     # column lock, value = j * 4 + old_state
TRAIL_WATERMARK = 3    # kill watermark, value = j * 16 + old_wm


@njit(cache=True)
def _apply_zero(i, M, cnt, rstat, tK, tV, tp, dead):
    rstat[i] = 3 if dead else 2
    s = M.shape[0]
    for j in range(s):
        cnt[j, M[i, j]] -= 1
    tK[tp] = TRAIL_ROW_ZERO
    tV[tp] = i
    return tp + 1


@njit(cache=True)
def _undo_to(mark, tp, tK, tV, M, S, cnt, slack, wm, rstat, cstat, box, h1, h2,
             chosen_n):
    s = M.shape[0]
    while tp > mark:
        tp -= 1
        k = tK[tp]
        v = tV[tp]
        if k == TRAIL_ROW_ZERO:
            rstat[v] = 0
            for j in range(s):
                cnt[j, M[v, j]] += 1
            box[1] += 1
        elif k == TRAIL_ROW_ONE:
            rstat[v] = 0
            box[0] -= 1
            box[1] += 1
            for j in range(s):
                S[j] -= M[v, j]
                cnt[j, M[v, j]] += 1
                slack[j] += M[v, j]
            chosen_n -= 1
        elif k == TRAIL_COL_LOCK:
            j = v // 4
            if cstat[j] == 1:
                box[2] -= 1
                slack[j] += h2 - h1
            else:
                box[3] -= 1
            cstat[j] = np.int8(v % 4)
        else:
            j = v // 16
            wm[j] = np.int8(v % 16)
    return tp, chosen_n


@njit(cache=True)
def _propagate(tp, tK, tV, M, S, cnt, slack, wm, rstat, cstat, box, h1, h2, m,
               t1cols, t2cols, bucket_ptr, bucket_rows):
    """Fixpoint of column bounds / locks and slack-driven row kills.
    Returns (tp, feasible)."""
    s = M.shape[0]
    changed = True
    while changed:
        changed = False
        rem = m - box[0]
        if box[1] < rem or rem < 0:
            return tp, False
        for j in range(s):
            # exact max/min addable with rem picks among open rows
            need = rem
            mx = 0
            for val in range(7, 0, -1):
                c = cnt[j, val]
                if c >= need:
                    mx += need * val
                    need = 0
                    break
                mx += c * val
                need -= c
            mn = 0
            need = rem
            for val in range(0, 8):
                c = cnt[j, val]
                take = c if c < need else need
                mn += take * val
                need -= take
                if need == 0:
                    break
            lo = S[j] + mn
            hi = S[j] + mx
            cs = cstat[j]
            okh1 = (cs != 2) and (lo <= h1) and (h1 <= hi)
            okh2 = (cs != 1) and (lo <= h2) and (h2 <= hi)
            if not okh1 and not okh2:
                return tp, False
            if cs == 0:
                if okh1 and not okh2:
                    tK[tp] = TRAIL_COL_LOCK
                    tV[tp] = j * 4
                    tp += 1
                    cstat[j] = 1
                    box[2] += 1
                    slack[j] -= h2 - h1
                    changed = True
                    if box[2] > t1cols:
                        return tp, False
                elif okh2 and not okh1:
                    tK[tp] = TRAIL_COL_LOCK
                    tV[tp] = j * 4
                    tp += 1
                    cstat[j] = 2
                    box[3] += 1
                    changed = True
                    if box[3] > t2cols:
                        return tp, False
        # bucket-driven kills: rows whose entry exceeds a column's slack
        for j in range(s):
            eff = slack[j]
            if eff > 7:
                eff = 7
            if eff < 0:
                eff = 0
            if wm[j] > eff:
                for val in range(eff + 1, wm[j] + 1):
                    base = j * 8 + val
                    for k in range(bucket_ptr[base], bucket_ptr[base + 1]):
                        i = bucket_rows[k]
                        if rstat[i] == 0:
                            tp = _apply_zero(i, M, cnt, rstat, tK, tV, tp, True)
                            box[1] -= 1
                            changed = True
                tK[tp] = TRAIL_WATERMARK
                tV[tp] = j * 16 + wm[j]
                tp += 1
                wm[j] = np.int8(eff)
    return tp, True


@njit(cache=True)
def _dominated(chosen, chosen_n, perms, zg_ptr, zg_list, sortbuf):
    """True if some group element g with g(z) = 0, z chosen, makes
    sorted(g(C)) lexicographically smaller than sorted(C)."""
    for ci in range(chosen_n):
        z = chosen[ci]
        for gi in range(zg_ptr[z], zg_ptr[z + 1]):
            g = zg_list[gi]
            for t in range(chosen_n):
                v = perms[g, chosen[t]]
                u = t
                while u > 0 and sortbuf[u - 1] > v:
                    sortbuf[u] = sortbuf[u - 1]
                    u -= 1
                sortbuf[u] = v
            for t in range(chosen_n):
                if sortbuf[t] < chosen[t]:
                    return True
                if sortbuf[t] > chosen[t]:
                    break
    return False


@njit(cache=True)
def _is_min_image(chosen, chosen_n, perms, sortbuf):
    """Exact lex-leader test of a complete set over the whole group."""
    for g in range(perms.shape[0]):
        for t in range(chosen_n):
            v = perms[g, chosen[t]]
            u = t
            while u > 0 and sortbuf[u - 1] > v:
                sortbuf[u] = sortbuf[u - 1]
                u -= 1
            sortbuf[u] = v
        for t in range(chosen_n):
            if sortbuf[t] < chosen[t]:
                return False
            if sortbuf[t] > chosen[t]:
                break
    return True


@njit(cache=True)
def _mask_of(rstat):
    mask = np.int64(0)
    for i in range(rstat.shape[0]):
        if rstat[i] == 1:
            mask |= np.int64(1) << np.int64(i)
    return mask


@njit(cache=True)
def search_subtree(M, h1, h2, m, t1cols, perms, zg_ptr, zg_list,
                   bucket_ptr, bucket_rows, prefix_vals, split_depth,
                   sol_out, fron_out):
    """DFS with propagation and symmetry dominance.

    prefix_vals: branch decisions to replay first (empty for a full run).
    split_depth >= 0: instead of descending past that many decisions, append
    the packed decision word to fron_out and defer the subtree.

    Returns (#solutions, #frontier words, #nodes, overflow_flag).  Solution
    masks land in sol_out; frontier words pack branch values little-endian.
    """
    s = M.shape[0]
    nsol = 0
    nfron = 0
    overflow = 0

    S = np.zeros(s, dtype=np.int32)
    cnt = np.zeros((s, 8), dtype=np.int32)
    for i in range(s):
        for j in range(s):
            cnt[j, M[i, j]] += 1
    rstat = np.zeros(s, dtype=np.int8)
    cstat = np.zeros(s, dtype=np.int8)
    slack = np.full(s, h2, dtype=np.int32)
    wm = np.full(s, 7, dtype=np.int8)
    box = np.zeros(4, dtype=np.int64)     # ones, open, locked-h1, locked-h2
    box[1] = s
    t2cols = s - t1cols
    chosen = np.zeros(s, dtype=np.int32)
    chosen_n = 0
    sortbuf = np.zeros(s, dtype=np.int32)
    extra_rows = np.zeros(s, dtype=np.int32)

    cap = 200000
    tK = np.zeros(cap, dtype=np.int32)
    tV = np.zeros(cap, dtype=np.int32)
    tp = 0

    mark = np.zeros(s + 2, dtype=np.int32)
    fstate = np.zeros(s + 2, dtype=np.int8)
    fval = np.zeros(s + 2, dtype=np.int8)
    nodes = 0

    tp, feas = _propagate(tp, tK, tV, M, S, cnt, slack, wm, rstat, cstat, box,
                          h1, h2, m, t1cols, t2cols, bucket_ptr, bucket_rows)
    if not feas:
        return nsol, nfron, nodes, overflow

    npre = prefix_vals.shape[0]
    for d in range(npre):
        bv = -1
        for i in range(s):
            if rstat[i] == 0:
                bv = i
                break
        if bv < 0:
            return nsol, nfron, nodes, overflow
        if prefix_vals[d] == 1:
            rstat[bv] = 1
            box[0] += 1
            box[1] -= 1
            for j in range(s):
                S[j] += M[bv, j]
                cnt[j, M[bv, j]] -= 1
                slack[j] -= M[bv, j]
            tK[tp] = TRAIL_ROW_ONE
            tV[tp] = bv
            tp += 1
            chosen[chosen_n] = bv
            chosen_n += 1
        else:
            tp = _apply_zero(bv, M, cnt, rstat, tK, tV, tp, False)
            box[1] -= 1
        tp, feas = _propagate(tp, tK, tV, M, S, cnt, slack, wm, rstat, cstat,
                              box, h1, h2, m, t1cols, t2cols,
                              bucket_ptr, bucket_rows)
        if not feas:
            return nsol, nfron, nodes, overflow

    depth = 0
    while depth >= 0:
        st = fstate[depth]
        if st == 0:
            mark[depth] = tp
            fstate[depth] = 1
            try_val = 1
        elif st == 1:
            tp, chosen_n = _undo_to(mark[depth], tp, tK, tV, M, S, cnt, slack,
                                    wm, rstat, cstat, box, h1, h2, chosen_n)
            fstate[depth] = 2
            try_val = 0
        else:
            tp, chosen_n = _undo_to(mark[depth], tp, tK, tV, M, S, cnt, slack,
                                    wm, rstat, cstat, box, h1, h2, chosen_n)
            fstate[depth] = 0
            depth -= 1
            continue

        bv = -1
        for i in range(s):
            if rstat[i] == 0:
                bv = i
                break
        if bv < 0:
            fstate[depth] = 2
            continue
        nodes += 1
        if try_val == 1:
            if box[0] >= m:
                continue
            ok = True
            for j in range(s):
                if M[bv, j] > slack[j]:
                    ok = False
                    break
            if not ok:
                continue
            rstat[bv] = 1
            box[0] += 1
            box[1] -= 1
            for j in range(s):
                S[j] += M[bv, j]
                cnt[j, M[bv, j]] -= 1
                slack[j] -= M[bv, j]
            tK[tp] = TRAIL_ROW_ONE
            tV[tp] = bv
            tp += 1
            chosen[chosen_n] = bv
            chosen_n += 1
            if _dominated(chosen, chosen_n, perms, zg_ptr, zg_list, sortbuf):
                continue
        else:
            if bv == 0:
                # the first orbit is forced into every reported solution
                continue
            tp = _apply_zero(bv, M, cnt, rstat, tK, tV, tp, False)
            box[1] -= 1
        tp, feas = _propagate(tp, tK, tV, M, S, cnt, slack, wm, rstat, cstat,
                              box, h1, h2, m, t1cols, t2cols,
                              bucket_ptr, bucket_rows)
        if not feas:
            continue
        if box[0] == m:
            # unique completion: every remaining open row goes to 0
            okall = True
            for j in range(s):
                if S[j] != h1 and S[j] != h2:
                    okall = False
                    break
            if okall and _is_min_image(chosen, chosen_n, perms, sortbuf):
                if nsol < sol_out.shape[0]:
                    sol_out[nsol] = _mask_of(rstat)
                    nsol += 1
                else:
                    overflow = 1
            continue
        if box[1] == m - box[0]:
            # unique completion: every remaining open row goes to 1
            extra = 0
            okall = True
            for i in range(s):
                if rstat[i] == 0:
                    fits = True
                    for j in range(s):
                        if M[i, j] > slack[j]:
                            fits = False
                            break
                    if not fits:
                        okall = False
                        break
                    extra_rows[extra] = i
                    extra += 1
                    for j in range(s):
                        S[j] += M[i, j]
                        slack[j] -= M[i, j]
            if okall:
                for j in range(s):
                    if S[j] != h1 and S[j] != h2:
                        okall = False
                        break
            if okall:
                old_n = chosen_n
                for t in range(extra):
                    chosen[chosen_n] = extra_rows[t]
                    chosen_n += 1
                if _is_min_image(chosen, chosen_n, perms, sortbuf):
                    full = _mask_of(rstat)
                    for t in range(extra):
                        full |= np.int64(1) << np.int64(extra_rows[t])
                    if nsol < sol_out.shape[0]:
                        sol_out[nsol] = full
                        nsol += 1
                    else:
                        overflow = 1
                chosen_n = old_n
            for t in range(extra):
                i = extra_rows[t]
                for j in range(s):
                    S[j] -= M[i, j]
                    slack[j] += M[i, j]
            continue
        if split_depth >= 0 and npre + depth + 1 >= split_depth:
            word = np.int64(0)
            for d in range(depth):
                if fval[d] == 1:
                    word |= np.int64(1) << np.int64(d)
            if try_val == 1:
                word |= np.int64(1) << np.int64(depth)
            if nfron < fron_out.shape[0]:
                fron_out[nfron] = word
                nfron += 1
            else:
                overflow = 1
            continue
        fval[depth] = try_val
        depth += 1
    return nsol, nfron, nodes, overflow


@njit(cache=True)
def brute_force_small(M, h1, h2, max_pop, out):
    """Exhaustive oracle: every selection containing orbit 0 with popcount
    <= max_pop whose spectrum lies inside {h1, h2}.  Only the obvious
    monotone cutoff (a column sum above h2 can never recover) is applied.
    Returns the number of solutions written to out."""
    s = M.shape[0]
    nout = 0
    S = np.zeros(s, dtype=np.int32)
    stack = np.zeros(max_pop + 1, dtype=np.int32)
    nxt = np.zeros(max_pop + 2, dtype=np.int32)

    for j in range(s):
        S[j] += M[0, j]
    stack[0] = 0
    ok = True
    for j in range(s):
        if S[j] != h1 and S[j] != h2:
            ok = False
            break
    if ok and nout < out.shape[0]:
        out[nout] = np.int64(1)
        nout += 1

    k = 1                  # rows chosen so far; frame k scans candidates
    nxt[1] = 1
    while k >= 1:
        i = nxt[k]
        if k == max_pop or i >= s:
            k -= 1
            if k >= 1:
                r = stack[k]
                for j in range(s):
                    S[j] -= M[r, j]
                nxt[k] = r + 1
            continue
        over = False
        for j in range(s):
            if S[j] + M[i, j] > h2:
                over = True
                break
        if over:
            nxt[k] = i + 1
            continue
        stack[k] = i
        for j in range(s):
            S[j] += M[i, j]
        ok = True
        for j in range(s):
            if S[j] != h1 and S[j] != h2:
                ok = False
                break
        if ok:
            mask = np.int64(0)
            for d in range(k + 1):
                mask |= np.int64(1) << np.int64(stack[d])
            if nout < out.shape[0]:
                out[nout] = mask
                nout += 1
        k += 1
        nxt[k] = i + 1
    return nout

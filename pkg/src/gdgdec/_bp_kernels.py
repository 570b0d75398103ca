"""Compiled inner loops for min-sum belief propagation with decimation.

Edge arrays are laid out check-node major: edge e belongs to check
`edge_cn[e]` and variable `cn_vn[e]`; `vn_edge` groups the same edge ids
variable-node major.  Decided variables (status 0/1) are skipped by every
update, so their messages stay frozen.
"""

import numpy as np
from numba import njit

BIG = 1e300


@njit(cache=True, nogil=True)
def cn_update(cn_ptr, cn_vn, vn_status, working_syndrome, msg_vc, msg_cv,
              alpha, clip):
    m = cn_ptr.size - 1
    for j in range(m):
        start, end = cn_ptr[j], cn_ptr[j + 1]
        min1 = BIG
        min2 = BIG
        arg1 = -1
        sign = -1.0 if working_syndrome[j] else 1.0
        n_act = 0
        for e in range(start, end):
            if vn_status[cn_vn[e]] != -1:
                continue
            n_act += 1
            v = msg_vc[e]
            if v < 0.0:
                sign = -sign
            a = -v if v < 0.0 else v
            if a < min1:
                min2 = min1
                min1 = a
                arg1 = e
            elif a < min2:
                min2 = a
        if n_act == 0:
            continue
        for e in range(start, end):
            if vn_status[cn_vn[e]] != -1:
                continue
            # divide out this edge's own sign; sign(0) counts as +1
            s_e = -sign if msg_vc[e] < 0.0 else sign
            if n_act == 1:
                mag = clip
            elif e == arg1:
                mag = min2
            else:
                mag = min1
            msg_cv[e] = alpha * s_e * mag


@njit(cache=True, nogil=True)
def vn_update(vn_ptr, vn_edge, priors, vn_status, msg_cv, msg_vc, posterior,
              history, slot, clip):
    n = vn_ptr.size - 1
    for i in range(n):
        if vn_status[i] != -1:
            continue
        tot = priors[i]
        for k in range(vn_ptr[i], vn_ptr[i + 1]):
            tot += msg_cv[vn_edge[k]]
        posterior[i] = tot
        history[i, slot] = tot
        for k in range(vn_ptr[i], vn_ptr[i + 1]):
            e = vn_edge[k]
            v = tot - msg_cv[e]
            if v > clip:
                v = clip
            elif v < -clip:
                v = -clip
            msg_vc[e] = v


@njit(cache=True, nogil=True)
def peel(cn_ptr, cn_vn, vn_ptr, vn_edge, edge_cn, vn_status,
         working_syndrome, cn_active_deg):
    """Repeatedly force the lone undecided neighbor of degree-1 checks.

    Returns 1 on contradiction (a fully decided check left unsatisfied),
    else 0.
    """
    m = cn_ptr.size - 1
    stack = np.empty(2 * m + 4, np.int32)
    top = 0
    for j in range(m):
        d = cn_active_deg[j]
        if d == 0:
            if working_syndrome[j]:
                return 1
        elif d == 1:
            stack[top] = j
            top += 1
    while top > 0:
        top -= 1
        j = stack[top]
        if cn_active_deg[j] != 1:
            continue
        vi = -1
        for e in range(cn_ptr[j], cn_ptr[j + 1]):
            if vn_status[cn_vn[e]] == -1:
                vi = cn_vn[e]
                break
        val = working_syndrome[j]
        vn_status[vi] = val
        for k in range(vn_ptr[vi], vn_ptr[vi + 1]):
            cj = edge_cn[vn_edge[k]]
            cn_active_deg[cj] -= 1
            if val:
                working_syndrome[cj] ^= 1
            d = cn_active_deg[cj]
            if d == 0:
                if working_syndrome[cj]:
                    return 1
            elif d == 1:
                stack[top] = cj
                top += 1
    return 0


@njit(cache=True, nogil=True)
def select_and_decimate(history, vn_status, vn_static_deg, posterior,
                        cn_ptr, cn_vn, vn_ptr, vn_edge, edge_cn,
                        working_syndrome, cn_active_deg,
                        use_agg, depth, p_a, p_b, p_c, p_d):
    """History-guided variable selection with optional aggressive fixing.

    Aggressively decided variables are fixed in place (status, degrees and
    working syndrome updated) and skipped; among the rest the most negative
    all-nonpositive history wins with f=1, else the minimum history sum
    with f = 1 iff that sum <= 0.  Returns (vn, f); (-1, -1) when no
    eligible variable remains.
    """
    m = cn_ptr.size - 1
    n = vn_ptr.size - 1
    unsat = np.zeros(m, np.uint8)
    if use_agg:
        for j in range(m):
            par = working_syndrome[j]
            for e in range(cn_ptr[j], cn_ptr[j + 1]):
                v = cn_vn[e]
                if vn_status[v] == -1 and posterior[v] <= 0.0:
                    par ^= 1
            unsat[j] = par
    best_neg_sum = BIG
    best_neg = -1
    best_sum = BIG
    best_any = -1
    for i in range(n):
        if vn_status[i] != -1 or vn_static_deg[i] < 3:
            continue
        h0 = history[i, 0]
        h1 = history[i, 1]
        h2 = history[i, 2]
        h3 = history[i, 3]
        s = h0 + h1 + h2 + h3
        if use_agg:
            dec = -1
            if h0 < p_a and h1 < p_a and h2 < p_a and h3 < p_a and s < p_b:
                dec = 1
            elif h0 > p_c and h1 > p_c and h2 > p_c and h3 > p_c and depth <= 4:
                dec = 0
            elif h0 > p_d and h1 > p_d and h2 > p_d and h3 > p_d:
                cnt = 0
                for k in range(vn_ptr[i], vn_ptr[i + 1]):
                    cnt += unsat[edge_cn[vn_edge[k]]]
                if cnt >= 3:
                    dec = 0
            if dec >= 0:
                vn_status[i] = dec
                for k in range(vn_ptr[i], vn_ptr[i + 1]):
                    cj = edge_cn[vn_edge[k]]
                    cn_active_deg[cj] -= 1
                    if dec == 1:
                        working_syndrome[cj] ^= 1
                continue
        if h0 <= 0.0 and h1 <= 0.0 and h2 <= 0.0 and h3 <= 0.0 and s < best_neg_sum:
            best_neg_sum = s
            best_neg = i
        if s < best_sum:
            best_sum = s
            best_any = i
    if best_neg >= 0:
        return best_neg, 1
    if best_any >= 0:
        return best_any, (1 if best_sum <= 0.0 else 0)
    return -1, -1

"""Numba @njit kernel implementations.

Same signatures and results as numpy_impl, but scalar loops with early exit
instead of vectorized blocks.  Compiled lazily on first call; cache=True
persists the machine code next to this file.
"""

import numpy as np
from numba import njit

BACKEND_NAME = "numba"


@njit(cache=True)
def _eval_program_at(code, child_ptr, child, tables_flat, table_off, n, assignment, vals):
    for i in range(len(code)):
        c = code[i]
        if c < 0:
            vals[i] = assignment[-c - 1]
        else:
            idx = 0
            for j in range(child_ptr[i], child_ptr[i + 1]):
                idx = idx * n + vals[child[j]]
            vals[i] = tables_flat[table_off[c] + idx]
    return vals[len(code) - 1]


@njit(cache=True)
def eval_program_points(code, child_ptr, child, tables_flat, table_off, n, var_values):
    num_points = var_values.shape[1]
    out = np.empty(num_points, dtype=np.int64)
    vals = np.empty(len(code), dtype=np.int64)
    point = np.empty(var_values.shape[0], dtype=np.int64)
    for p in range(num_points):
        for v in range(var_values.shape[0]):
            point[v] = var_values[v, p]
        out[p] = _eval_program_at(code, child_ptr, child, tables_flat, table_off,
                                  n, point, vals)
    return out


@njit(cache=True)
def find_identity_violation(lcode, lptr, lchild, rcode, rptr, rchild,
                            tables_flat, table_off, n, var_count, start, stop):
    assignment = np.empty(var_count, dtype=np.int64)
    lvals = np.empty(len(lcode), dtype=np.int64)
    rvals = np.empty(len(rcode), dtype=np.int64)
    for flat in range(start, stop):
        rem = flat
        for j in range(var_count - 1, -1, -1):
            assignment[j] = rem % n
            rem //= n
        lv = _eval_program_at(lcode, lptr, lchild, tables_flat, table_off, n,
                              assignment, lvals)
        rv = _eval_program_at(rcode, rptr, rchild, tables_flat, table_off, n,
                              assignment, rvals)
        if lv != rv:
            return flat
    return -1


@njit(cache=True)
def compat_violation(table, arity, n, pa, pb, rel):
    m = len(pa)
    if arity == 0:
        c = table[0]
        return -1 if rel[c, c] != 0 else 0
    total = m ** arity
    choice = np.empty(arity, dtype=np.int64)
    for flat in range(total):
        rem = flat
        for j in range(arity - 1, -1, -1):
            choice[j] = rem % m
            rem //= m
        aidx = 0
        bidx = 0
        for j in range(arity):
            aidx = aidx * n + pa[choice[j]]
            bidx = bidx * n + pb[choice[j]]
        if rel[table[aidx], table[bidx]] == 0:
            return flat
    return -1


@njit(cache=True)
def close_under_ops(tables_flat, table_off, arities, n, adj):
    adj = adj.copy()
    for i in range(n):
        adj[i, i] = 1
    for i in range(n):
        for j in range(n):
            if adj[i, j]:
                adj[j, i] = 1
    num_ops = len(table_off)
    pa = np.empty(n * n, dtype=np.int64)
    pb = np.empty(n * n, dtype=np.int64)
    while True:
        m = 0
        for i in range(n):
            for j in range(n):
                if adj[i, j]:
                    pa[m] = i
                    pb[m] = j
                    m += 1
        grew = False
        for k in range(num_ops):
            arity = arities[k]
            off = table_off[k]
            if arity == 0:
                c = tables_flat[off]
                if adj[c, c] == 0:
                    adj[c, c] = 1
                    grew = True
                continue
            total = m ** arity
            choice = np.empty(arity, dtype=np.int64)
            for flat in range(total):
                rem = flat
                for j in range(arity - 1, -1, -1):
                    choice[j] = rem % m
                    rem //= m
                aidx = 0
                bidx = 0
                for j in range(arity):
                    aidx = aidx * n + pa[choice[j]]
                    bidx = bidx * n + pb[choice[j]]
                fa = tables_flat[off + aidx]
                fb = tables_flat[off + bidx]
                if adj[fa, fb] == 0:
                    adj[fa, fb] = 1
                    grew = True
        if not grew:
            return adj


@njit(cache=True)
def complex_op_table(table, arity, n):
    num_masks = (1 << n) - 1
    if arity == 0:
        out = np.empty(1, dtype=np.int64)
        out[0] = 1 << table[0]
        return out
    # Same OR-fold per argument axis as the numpy path, on the flat layout:
    # before folding axis `axis`, axes left of it index masks, axes right of
    # it still index single elements.
    cube = np.empty(n ** arity, dtype=np.int64)
    for i in range(n ** arity):
        cube[i] = 1 << table[i]
    for axis in range(arity):
        left = num_masks ** axis
        right = n ** (arity - axis - 1)
        out = np.empty(left * num_masks * right, dtype=np.int64)
        for lo in range(left):
            for mask in range(1, num_masks + 1):
                low = mask & -mask
                rest = mask ^ low
                elem = 0
                while (1 << elem) != low:
                    elem += 1
                for hi in range(right):
                    acc = cube[(lo * n + elem) * right + hi]
                    if rest != 0:
                        acc |= out[(lo * num_masks + rest - 1) * right + hi]
                    out[(lo * num_masks + mask - 1) * right + hi] = acc
        cube = out
    return cube

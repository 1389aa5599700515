"""Pure-numpy kernel implementations (vectorized, no JIT).

All kernels take plain int64 numpy arrays and scalars so the numba backend
can mirror the signatures exactly.  Term programs are postorder node arrays:
code[i] >= 0 is an operation slot (offset table_off[code[i]] into the flat
table pack), code[i] < 0 is variable slot ~code[i]; children of node i are
child[child_ptr[i]:child_ptr[i+1]], all with index < i.
"""

import numpy as np

BACKEND_NAME = "numpy"

# Bound on points handled per vectorized block; keeps peak memory flat when a
# scan approaches the assignment cap.
_CHUNK = 1 << 17


def eval_program_points(code, child_ptr, child, tables_flat, table_off, n, var_values):
    """Evaluate one term program at explicit points.

    var_values has shape (num_vars, num_points); returns (num_points,) values.
    """
    num_points = var_values.shape[1]
    vals: list[np.ndarray] = [None] * len(code)  # type: ignore[list-item]
    for i in range(len(code)):
        c = code[i]
        if c < 0:
            vals[i] = var_values[~c]
        else:
            idx = np.zeros(num_points, dtype=np.int64)
            for j in range(child_ptr[i], child_ptr[i + 1]):
                idx = idx * n + vals[child[j]]
            vals[i] = tables_flat[table_off[c] + idx]
    return vals[len(code) - 1]


def _assignment_columns(start, stop, n, var_count):
    """Row-major assignment grid columns for flat indices [start, stop)."""
    pts = np.arange(start, stop, dtype=np.int64)
    cols = np.empty((var_count, stop - start), dtype=np.int64)
    div = 1
    for j in range(var_count - 1, -1, -1):
        cols[j] = (pts // div) % n
        div *= n
    return cols


def find_identity_violation(lcode, lptr, lchild, rcode, rptr, rchild,
                            tables_flat, table_off, n, var_count, start, stop):
    """First flat assignment index in [start, stop) where lhs != rhs, else -1.

    Flat indices enumerate assignments row-major with the first variable most
    significant, so the first hit is the lexicographically least witness.
    """
    for lo in range(start, stop, _CHUNK):
        hi = min(lo + _CHUNK, stop)
        cols = _assignment_columns(lo, hi, n, var_count)
        lv = eval_program_points(lcode, lptr, lchild, tables_flat, table_off, n, cols)
        rv = eval_program_points(rcode, rptr, rchild, tables_flat, table_off, n, cols)
        ne = lv != rv
        if ne.any():
            return lo + int(np.argmax(ne))
    return -1


def _pair_tuple_columns(start, stop, components, arity):
    """Columns of pair-component choices for flat tuple indices [start, stop)."""
    m = len(components)
    pts = np.arange(start, stop, dtype=np.int64)
    cols = np.empty((arity, stop - start), dtype=np.int64)
    div = 1
    for j in range(arity - 1, -1, -1):
        cols[j] = components[(pts // div) % m]
        div *= m
    return cols


def compat_violation(table, arity, n, pa, pb, rel):
    """First flat index over member-pair tuples where (f(a), f(b)) leaves rel.

    pa/pb are the left/right components of the member pairs; rel is an n*n
    uint8 matrix.  Returns -1 when the relation is compatible with f.
    """
    m = len(pa)
    total = m ** arity
    if arity == 0:
        return -1 if rel[table[0], table[0]] else 0
    for lo in range(0, total, _CHUNK):
        hi = min(lo + _CHUNK, total)
        acols = _pair_tuple_columns(lo, hi, pa, arity)
        bcols = _pair_tuple_columns(lo, hi, pb, arity)
        aidx = np.zeros(hi - lo, dtype=np.int64)
        bidx = np.zeros(hi - lo, dtype=np.int64)
        for j in range(arity):
            aidx = aidx * n + acols[j]
            bidx = bidx * n + bcols[j]
        bad = rel[table[aidx], table[bidx]] == 0
        if bad.any():
            return lo + int(np.argmax(bad))
    return -1


def close_under_ops(tables_flat, table_off, arities, n, adj):
    """Least reflexive-symmetric-compatible superset of adj (n*n uint8).

    Fixpoint: repeatedly add (f(a1..ak), f(b1..bk)) over all tuples of member
    pairs; the relation only grows inside n*n, so this terminates.
    """
    adj = adj.copy()
    adj |= np.eye(n, dtype=np.uint8)
    adj |= adj.T
    while True:
        pa, pb = np.nonzero(adj)
        grew = False
        for k in range(len(table_off)):
            arity = arities[k]
            table = tables_flat[table_off[k]:]
            if arity == 0:
                c = table[0]
                if not adj[c, c]:
                    adj[c, c] = 1
                    grew = True
                continue
            total = len(pa) ** arity
            for lo in range(0, total, _CHUNK):
                hi = min(lo + _CHUNK, total)
                acols = _pair_tuple_columns(lo, hi, pa, arity)
                bcols = _pair_tuple_columns(lo, hi, pb, arity)
                aidx = np.zeros(hi - lo, dtype=np.int64)
                bidx = np.zeros(hi - lo, dtype=np.int64)
                for j in range(arity):
                    aidx = aidx * n + acols[j]
                    bidx = bidx * n + bcols[j]
                fa = table[aidx]
                fb = table[bidx]
                if (adj[fa, fb] == 0).any():
                    adj[fa, fb] = 1
                    grew = True
        if not grew:
            return adj


def complex_op_table(table, arity, n):
    """Complexwise operation table over nonempty-subset bitmasks.

    Output is flat over (2^n - 1)^arity argument tuples in row-major order,
    argument j running over masks 1..2^n-1; each entry is the bitmask of
    {f(x_1..x_k) : x_j in X_j}.  Built by one OR-fold per argument axis:
    the image for mask X is the image for X minus its lowest bit, OR'd with
    the image for that single element.
    """
    num_masks = (1 << n) - 1
    if arity == 0:
        return np.array([1 << table[0]], dtype=np.int64)
    cube = np.left_shift(1, table.reshape((n,) * arity)).astype(np.int64)
    for axis in range(arity):
        moved = np.moveaxis(cube, axis, 0)
        out = np.empty((num_masks,) + moved.shape[1:], dtype=np.int64)
        for mask in range(1, num_masks + 1):
            low = mask & -mask
            rest = mask ^ low
            single = moved[low.bit_length() - 1]
            out[mask - 1] = single if rest == 0 else out[rest - 1] | single
        cube = np.moveaxis(out, 0, axis)
    return cube.reshape(-1)

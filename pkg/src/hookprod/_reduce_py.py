"""Pure-Python column reduction over F_p (fallback for the compiled kernel)."""


def _axpy(target, source, factor, p):
    # target - factor * source, both sorted by row, result sorted with zeros dropped
    out = []
    i = j = 0
    nt, ns = len(target), len(source)
    while i < nt and j < ns:
        rt, ct = target[i]
        rs, cs = source[j]
        if rt < rs:
            out.append((rt, ct))
            i += 1
        elif rs < rt:
            out.append((rs, (-factor * cs) % p))
            j += 1
        else:
            c = (ct - factor * cs) % p
            if c:
                out.append((rt, c))
            i += 1
            j += 1
    out.extend(target[i:])
    out.extend((r, (-factor * c) % p) for r, c in source[j:])
    return out


def reduce_columns(columns, nrows, p):
    """Left-to-right reduction.

    Returns ``(reduced, lows)`` where ``lows[j]`` is the pivot row of the
    reduced column j, or -1 when it reduced to zero.
    """
    pivot_col = [-1] * nrows
    reduced = []
    lows = []
    for col in columns:
        col = list(col)
        while col:
            low, c = col[-1]
            k = pivot_col[low]
            if k < 0:
                break
            other = reduced[k]
            factor = c * pow(other[-1][1], p - 2, p) % p
            col = _axpy(col, other, factor, p)
        j = len(reduced)
        reduced.append(col)
        if col:
            pivot_col[col[-1][0]] = j
            lows.append(col[-1][0])
        else:
            lows.append(-1)
    return reduced, lows

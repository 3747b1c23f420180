# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled column reduction over F_p; same contract as ``_reduce_py``."""
from libcpp.vector cimport vector
from libcpp.pair cimport pair

ctypedef pair[long, long] entry
ctypedef vector[entry] column


cdef long inverse_mod(long a, long p) nogil:
    cdef long t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef void axpy(column& target, const column& source, long factor, long p, column& out) nogil:
    cdef size_t i = 0, j = 0
    cdef size_t nt = target.size(), ns = source.size()
    cdef long c
    out.clear()
    while i < nt and j < ns:
        if target[i].first < source[j].first:
            out.push_back(target[i])
            i += 1
        elif source[j].first < target[i].first:
            c = (p - (factor * source[j].second) % p) % p
            out.push_back(entry(source[j].first, c))
            j += 1
        else:
            c = (target[i].second - factor * source[j].second) % p
            if c < 0:
                c += p
            if c != 0:
                out.push_back(entry(target[i].first, c))
            i += 1
            j += 1
    while i < nt:
        out.push_back(target[i])
        i += 1
    while j < ns:
        c = (p - (factor * source[j].second) % p) % p
        out.push_back(entry(source[j].first, c))
        j += 1


def reduce_columns(columns, long nrows, long p):
    cdef vector[column] cols
    cdef vector[long] pivot_col = vector[long](nrows, -1)
    cdef column cur, scratch
    cdef long low, k, factor
    cdef size_t j, n
    lows = []
    for col in columns:
        cur.clear()
        for r, c in col:
            cur.push_back(entry(r, c))
        while cur.size() > 0:
            low = cur.back().first
            k = pivot_col[low]
            if k < 0:
                break
            factor = (cur.back().second * inverse_mod(cols[k].back().second, p)) % p
            axpy(cur, cols[k], factor, p, scratch)
            cur.swap(scratch)
        cols.push_back(cur)
        if cur.size() > 0:
            pivot_col[cur.back().first] = cols.size() - 1
            lows.append(cur.back().first)
        else:
            lows.append(-1)
    n = cols.size()
    reduced = []
    for j in range(n):
        reduced.append([(e.first, e.second) for e in cols[j]])
    return reduced, lows

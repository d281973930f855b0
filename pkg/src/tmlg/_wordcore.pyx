# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled word kernel: cancellation on integer-encoded letters.

Interface mirrors ``_wordcore_py``; letters are nonzero C longs.
"""

BACKEND = "cython"


def cancel(letters):
    cdef list out = []
    cdef long x, top
    cdef Py_ssize_t depth = 0
    for x in letters:
        if depth > 0:
            top = out[depth - 1]
            if top == -x:
                out.pop()
                depth -= 1
                continue
        out.append(x)
        depth += 1
    return out


def splice(a, b):
    cdef list res = list(a)
    cdef Py_ssize_t i = 0, n = len(b), depth = len(res)
    cdef long x
    while depth > 0 and i < n:
        x = b[i]
        if <long> res[depth - 1] == -x:
            res.pop()
            depth -= 1
            i += 1
        else:
            break
    res.extend(b[i:])
    return res

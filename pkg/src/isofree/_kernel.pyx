# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled word kernels; see _kernel_py for the reference implementation."""

from libc.stdlib cimport malloc, free

BACKEND = "compiled"


cdef inline tuple _from_buf(long* buf, Py_ssize_t n):
    cdef Py_ssize_t i
    out = [0] * n
    for i in range(n):
        out[i] = buf[i]
    return tuple(out)


def reduce_letters(seq):
    """Freely reduce a letter sequence; returns a tuple."""
    cdef tuple t = tuple(seq)
    cdef Py_ssize_t n = len(t)
    if n == 0:
        return ()
    cdef long* buf = <long*> malloc(n * sizeof(long))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t k = 0
    cdef long v
    try:
        for item in t:
            v = item
            if k > 0 and buf[k - 1] == -v:
                k -= 1
            else:
                buf[k] = v
                k += 1
        return _from_buf(buf, k)
    finally:
        free(buf)


def invert_letters(w):
    cdef tuple t = tuple(w)
    cdef Py_ssize_t n = len(t)
    cdef Py_ssize_t i
    out = [0] * n
    for i in range(n):
        out[i] = -<long> t[n - 1 - i]
    return tuple(out)


def concat_reduced(a, b):
    """Product of two already-reduced words; cancellation only at the seam."""
    cdef tuple ta = tuple(a)
    cdef tuple tb = tuple(b)
    cdef Py_ssize_t i = len(ta)
    cdef Py_ssize_t j = 0
    cdef Py_ssize_t nb = len(tb)
    while i > 0 and j < nb and <long> ta[i - 1] == -<long> tb[j]:
        i -= 1
        j += 1
    return ta[:i] + tb[j:]


def conjugate_reduced(c, r):
    """c * r * c^-1 for reduced c, r."""
    return concat_reduced(concat_reduced(c, r), invert_letters(c))


def substitute_reduced(w, images):
    """Replace letter +-(i+1) by images[i]^{+-1} and reduce."""
    cdef tuple tw = tuple(w)
    cdef tuple imgs = tuple(tuple(x) for x in images)
    cdef Py_ssize_t total = 0
    cdef tuple img
    for img in imgs:
        if len(img) > total:
            total = len(img)
    total = (total + 1) * (len(tw) + 1)
    cdef long* buf = <long*> malloc(total * sizeof(long))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t k = 0
    cdef Py_ssize_t idx
    cdef long v, u
    try:
        for item in tw:
            v = item
            if v > 0:
                img = imgs[v - 1]
                for idx in range(len(img)):
                    u = img[idx]
                    if k > 0 and buf[k - 1] == -u:
                        k -= 1
                    else:
                        buf[k] = u
                        k += 1
            else:
                img = imgs[-v - 1]
                for idx in range(len(img) - 1, -1, -1):
                    u = -<long> img[idx]
                    if k > 0 and buf[k - 1] == -u:
                        k -= 1
                    else:
                        buf[k] = u
                        k += 1
        return _from_buf(buf, k)
    finally:
        free(buf)


def exp_vector(w, m):
    """Exponent sum of each of the m generators."""
    cdef long v
    vec = [0] * m
    for item in w:
        v = item
        if v > 0:
            vec[v - 1] += 1
        else:
            vec[-v - 1] -= 1
    return tuple(vec)


def cyclic_bounds(w):
    """(i, j) such that w[i:j] is the cyclic core and w[:i] the conjugator."""
    cdef tuple t = tuple(w)
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t j = len(t)
    while j - i >= 2 and <long> t[i] == -<long> t[j - 1]:
        i += 1
        j -= 1
    return i, j

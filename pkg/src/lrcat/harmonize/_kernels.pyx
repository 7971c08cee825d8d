# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled similarity kernels.

Semantics must match ``_kernels_py`` exactly; the test suite cross-checks
the two backends on random inputs. Strings are widened to UTF-32 so the
inner loops run over flat C arrays regardless of what the text contains.
"""

from libc.stdlib cimport free, malloc

BACKEND = "c"


cdef inline int _imin3(int x, int y, int z) nogil:
    cdef int m = x
    if y < m:
        m = y
    if z < m:
        m = z
    return m


def levenshtein(str a, str b):
    """Plain edit distance (insert, delete, substitute all cost 1)."""
    if a == b:
        return 0
    cdef bytes ab = a.encode("utf-32-le")
    cdef bytes bb = b.encode("utf-32-le")
    cdef const unsigned int[::1] av = memoryview(ab).cast("I") if len(ab) else None
    cdef const unsigned int[::1] bv = memoryview(bb).cast("I") if len(bb) else None
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t lb = len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la

    cdef int *previous = <int *> malloc((lb + 1) * sizeof(int))
    cdef int *current = <int *> malloc((lb + 1) * sizeof(int))
    if previous == NULL or current == NULL:
        free(previous)
        free(current)
        raise MemoryError()

    cdef Py_ssize_t i, j
    cdef int cost, result
    cdef int *tmp
    try:
        for j in range(lb + 1):
            previous[j] = <int> j
        for i in range(la):
            current[0] = <int> (i + 1)
            for j in range(lb):
                cost = 0 if av[i] == bv[j] else 1
                current[j + 1] = _imin3(previous[j + 1] + 1, current[j] + 1, previous[j] + cost)
            tmp = previous
            previous = current
            current = tmp
        result = previous[lb]
    finally:
        free(previous)
        free(current)
    return result


cdef int _cmp_u64(const void *pa, const void *pb) noexcept nogil:
    cdef unsigned long long x = (<const unsigned long long *> pa)[0]
    cdef unsigned long long y = (<const unsigned long long *> pb)[0]
    if x < y:
        return -1
    if x > y:
        return 1
    return 0


from libc.stdlib cimport qsort


cdef unsigned long long *_bigram_codes(const unsigned int[::1] view, Py_ssize_t n) except NULL:
    cdef unsigned long long *codes = <unsigned long long *> malloc(n * sizeof(unsigned long long))
    if codes == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        codes[i] = ((<unsigned long long> view[i]) << 32) | view[i + 1]
    qsort(codes, n, sizeof(unsigned long long), _cmp_u64)
    return codes


def dice(str a, str b):
    """Dice coefficient over character-bigram multisets."""
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t lb = len(b)
    if la < 2 and lb < 2:
        return 1.0 if a == b else 0.0
    if la < 2 or lb < 2:
        return 0.0

    cdef bytes ab = a.encode("utf-32-le")
    cdef bytes bb = b.encode("utf-32-le")
    cdef const unsigned int[::1] av = memoryview(ab).cast("I")
    cdef const unsigned int[::1] bv = memoryview(bb).cast("I")

    cdef Py_ssize_t na = la - 1
    cdef Py_ssize_t nb = lb - 1
    cdef unsigned long long *ca = _bigram_codes(av, na)
    cdef unsigned long long *cb = NULL
    cdef Py_ssize_t i = 0, j = 0
    cdef long shared = 0
    try:
        cb = _bigram_codes(bv, nb)
        while i < na and j < nb:
            if ca[i] == cb[j]:
                shared += 1
                i += 1
                j += 1
            elif ca[i] < cb[j]:
                i += 1
            else:
                j += 1
    finally:
        free(ca)
        free(cb)
    return 2.0 * shared / (na + nb)

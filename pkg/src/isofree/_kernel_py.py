"""Pure-Python word kernels.

Mirror of the compiled module `isofree._kernel`; both expose the same
functions on the same representation: a word is a tuple of nonzero ints,
where generator i (0-based) is i+1 and its inverse is -(i+1).
"""

BACKEND = "python"


def reduce_letters(seq):
    """Freely reduce a letter sequence; returns a tuple."""
    out = []
    push = out.append
    pop = out.pop
    for v in seq:
        if out and out[-1] == -v:
            pop()
        else:
            push(v)
    return tuple(out)


def invert_letters(w):
    return tuple(-v for v in reversed(w))


def concat_reduced(a, b):
    """Product of two already-reduced words; cancellation only at the seam."""
    i = len(a)
    j = 0
    nb = len(b)
    while i > 0 and j < nb and a[i - 1] == -b[j]:
        i -= 1
        j += 1
    return tuple(a[:i]) + tuple(b[j:])


def conjugate_reduced(c, r):
    """c * r * c^-1 for reduced c, r."""
    return concat_reduced(concat_reduced(c, r), invert_letters(c))


def substitute_reduced(w, images):
    """Replace letter +-(i+1) by images[i]^{+-1} and reduce.

    `images` is a sequence of reduced tuples, one per generator.
    """
    out = []
    pop = out.pop
    push = out.append
    for v in w:
        if v > 0:
            for u in images[v - 1]:
                if out and out[-1] == -u:
                    pop()
                else:
                    push(u)
        else:
            img = images[-v - 1]
            for k in range(len(img) - 1, -1, -1):
                u = -img[k]
                if out and out[-1] == -u:
                    pop()
                else:
                    push(u)
    return tuple(out)


def exp_vector(w, m):
    """Exponent sum of each of the m generators."""
    vec = [0] * m
    for v in w:
        if v > 0:
            vec[v - 1] += 1
        else:
            vec[-v - 1] -= 1
    return tuple(vec)


def cyclic_bounds(w):
    """(i, j) such that w[i:j] is the cyclic core and w[:i] the conjugator."""
    i = 0
    j = len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return i, j

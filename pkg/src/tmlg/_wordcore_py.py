"""Pure-Python word kernel: cancellation on integer-encoded letters.

A letter is a nonzero int: +k / -k for the k-th edge traversed forwards /
backwards (k is 1-based). The compiled twin in ``_wordcore.pyx`` has the
same interface; ``graph`` picks whichever imports.
"""

BACKEND = "python"


def cancel(letters):
    """Stack pass removing adjacent inverse pairs until none remain."""
    out = []
    push = out.append
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            push(x)
    return out


def splice(a, b):
    """Concatenate two already-cancelled words, cancelling at the seam."""
    a = list(a)
    i = 0
    n = len(b)
    while a and i < n and a[-1] == -b[i]:
        a.pop()
        i += 1
    a.extend(b[i:])
    return a

"""Pure-Python reduction kernel.

Polynomials are pairs of parallel lists: keys strictly descending and
nonzero integer coefficients. Basis entries handed to :func:`normal_form` are
tuples ``(lead_key, lead_pe, lead_coeff, tail_keys, tail_coeffs)``.
"""

from math import gcd

IMPLEMENTATION = "python"


def axpy(a, fk, fc, fs, b, gk, gc, gs):
    """a * x^fs * f + b * x^gs * g, shifts given as key offsets."""
    rk = []
    rc = []
    i = j = 0
    nf = len(fk)
    ng = len(gk)
    while i < nf and j < ng:
        kf = fk[i] + fs
        kg = gk[j] + gs
        if kf > kg:
            rk.append(kf)
            rc.append(a * fc[i])
            i += 1
        elif kf < kg:
            rk.append(kg)
            rc.append(b * gc[j])
            j += 1
        else:
            c = a * fc[i] + b * gc[j]
            if c:
                rk.append(kf)
                rc.append(c)
            i += 1
            j += 1
    while i < nf:
        rk.append(fk[i] + fs)
        rc.append(a * fc[i])
        i += 1
    while j < ng:
        rk.append(gk[j] + gs)
        rc.append(b * gc[j])
        j += 1
    return rk, rc


def primitive(fk, fc):
    """Divide out the content and make the leading coefficient positive."""
    if not fc:
        return fk, fc
    g = gcd(*fc)
    if fc[0] < 0:
        g = -g
    if g != 1:
        fc = [c // g for c in fc]
    return fk, fc


def normal_form(fk, fc, basis, mask, guard, full):
    """Reduce f modulo the basis; only the head is reduced unless ``full``.

    The result is primitive, i.e. a nonzero rational multiple of the true
    remainder with coprime integer coefficients.
    """
    rk = []
    rc = []
    while fk:
        k = fk[0]
        pg = (k & mask) | guard
        red = None
        for entry in basis:
            if (pg - entry[1]) & guard == guard:
                red = entry
                break
        if red is None:
            if not full:
                rk.extend(fk)
                rc.extend(fc)
                break
            rk.append(k)
            rc.append(fc[0])
            fk = fk[1:]
            fc = fc[1:]
            continue
        lk, _, lc, tk, tc = red
        c = fc[0]
        g = gcd(c, lc)
        a = lc // g
        b = c // g
        if a < 0:
            a = -a
            b = -b
        if a != 1:
            rc = [a * x for x in rc]
        fk, fc = axpy(a, fk[1:], fc[1:], 0, -b, tk, tc, k - lk)
        if a != 1 and (rc or fc):
            h = gcd(*rc, *fc)
            if h != 1:
                rc = [x // h for x in rc]
                fc = [x // h for x in fc]
    return primitive(rk, rc)

# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled reduction kernel; same contract as ``_kernel_py``."""

from math import gcd

IMPLEMENTATION = "cython"


cpdef tuple axpy(object a, list fk, list fc, object fs, object b, list gk, list gc, object gs):
    cdef list rk = []
    cdef list rc = []
    cdef Py_ssize_t i = 0, j = 0
    cdef Py_ssize_t nf = len(fk), ng = len(gk)
    cdef object kf, kg, c
    if nf and ng:
        kf = fk[0] + fs
        kg = gk[0] + gs
        while True:
            if kf > kg:
                rk.append(kf)
                rc.append(a * fc[i])
                i += 1
                if i == nf:
                    break
                kf = fk[i] + fs
            elif kf < kg:
                rk.append(kg)
                rc.append(b * gc[j])
                j += 1
                if j == ng:
                    break
                kg = gk[j] + gs
            else:
                c = a * fc[i] + b * gc[j]
                if c:
                    rk.append(kf)
                    rc.append(c)
                i += 1
                j += 1
                if i == nf or j == ng:
                    break
                kf = fk[i] + fs
                kg = gk[j] + gs
    while i < nf:
        rk.append(fk[i] + fs)
        rc.append(a * fc[i])
        i += 1
    while j < ng:
        rk.append(gk[j] + gs)
        rc.append(b * gc[j])
        j += 1
    return rk, rc


cpdef tuple primitive(list fk, list fc):
    cdef object g
    if not fc:
        return fk, fc
    g = gcd(*fc)
    if fc[0] < 0:
        g = -g
    if g != 1:
        fc = [c // g for c in fc]
    return fk, fc


cpdef tuple normal_form(list fk, list fc, list basis, object mask, object guard, bint full):
    cdef list rk = []
    cdef list rc = []
    cdef Py_ssize_t nb = len(basis), t
    cdef object k, pg, entry, red, lk, lc, c, g, a, b, h
    cdef tuple tentry
    while fk:
        k = fk[0]
        pg = (k & mask) | guard
        red = None
        for t in range(nb):
            tentry = <tuple>basis[t]
            if (pg - tentry[1]) & guard == guard:
                red = tentry
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
        tentry = <tuple>red
        lk = tentry[0]
        lc = tentry[2]
        c = fc[0]
        g = gcd(c, lc)
        a = lc // g
        b = c // g
        if a < 0:
            a = -a
            b = -b
        if a != 1:
            rc = [a * x for x in rc]
        fk, fc = axpy(a, fk[1:], fc[1:], 0, -b, <list>tentry[3], <list>tentry[4], k - lk)
        if a != 1 and (rc or fc):
            h = gcd(*rc, *fc)
            if h != 1:
                rc = [x // h for x in rc]
                fc = [x // h for x in fc]
    return primitive(rk, rc)

"""Tiny helpers for linear combinations stored as {key: raw coefficient}."""


def add_into(dst, key, coeff, ring):
    if ring.is_zero(coeff):
        return
    s = ring.add(dst.get(key, ring.zero()), coeff)
    if ring.is_zero(s):
        dst.pop(key, None)
    else:
        dst[key] = s


def add_lin(dst, src, ring, factor=None):
    if factor is not None and ring.is_zero(factor):
        return dst
    for key, c in src.items():
        add_into(dst, key, c if factor is None else ring.mul(factor, c), ring)
    return dst


def scale_lin(src, factor, ring):
    if ring.is_zero(factor):
        return {}
    return {k: ring.mul(factor, c) for k, c in src.items()}


def neg_lin(src, ring):
    return {k: ring.neg(c) for k, c in src.items()}


def sub_lin(a, b, ring):
    out = dict(a)
    for k, c in b.items():
        add_into(out, k, ring.neg(c), ring)
    return out


def lin_is_zero(src):
    return not src

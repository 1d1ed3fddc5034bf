"""Pure-Python reference kernels (always available)."""

BIG = 1 << 61


def conv_trunc(a, b, n, mod):
    """First n coefficients of a*b, reduced modulo mod when mod > 0."""
    out = [0] * n
    lb = len(b)
    for i, ai in enumerate(a):
        if i >= n:
            break
        if not ai:
            continue
        top = min(lb, n - i)
        for j in range(top):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    if mod:
        out = [c % mod for c in out]
    return out


def minplus_trunc(pa, va, pb, vb, n):
    """out[k] = min over i+j=k of min(pa[i] + vb[j], pb[j] + va[i]), capped at BIG."""
    out = [BIG] * n
    lb = len(pb)
    for i in range(min(len(pa), n)):
        pai = pa[i]
        vai = va[i]
        top = min(lb, n - i)
        for j in range(top):
            x = pai + vb[j]
            y = pb[j] + vai
            if y < x:
                x = y
            if x < out[i + j]:
                out[i + j] = x
    return [BIG if x > BIG else x for x in out]

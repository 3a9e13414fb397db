"""Compiled inner loops over table-represented fields.

Every kernel takes the field as ``T = (p, qm1, tab)`` (see ``FieldCtx.ktab``),
where ``tab`` packs four tables back to back:

    exp  [0, 2 qm1)              g^k, doubled so log sums need no reduction
    log  [2 qm1, 3 qm1 + 1)      log of each encoding (log 0 = -1)
    zech [3 qm1 + 1, 4 qm1 + 1)  log(1 + g^d), -1 when 1 + g^d = 0
    neg  [4 qm1 + 1, 5 qm1 + 2)  additive inverse

Element encodings are int64.  Polynomials are int64 coefficient arrays in
ascending degree; degree -1 means the zero polynomial.

Performance note: a numba helper that takes several arrays costs far more per
call than one taking a single array, so everything shares the packed table and
hot loops call the fused ``_fma`` (acc + a*b) once per iteration.
Subtraction of a*b is written as ``_fma(acc, neg(a), b)``.
"""

import numpy as np
from numba import njit


# -- scalar helpers ---------------------------------------------------------------

@njit(cache=True, inline="always")
def _neg(a, qm1, tab):
    return tab[4 * qm1 + 1 + a]


@njit(cache=True, inline="always")
def _mul(a, b, qm1, tab):
    if a == 0 or b == 0:
        return 0
    L = 2 * qm1
    return tab[tab[L + a] + tab[L + b]]


@njit(cache=True, inline="always")
def _add(a, b, p, qm1, tab):
    if p == 2:
        return a ^ b
    if a == 0:
        return b
    if b == 0:
        return a
    L = 2 * qm1
    la = tab[L + a]
    d = tab[L + b] - la
    if d < 0:
        d += qm1
    z = tab[3 * qm1 + 1 + d]
    if z < 0:
        return 0
    return tab[la + z]


@njit(cache=True, inline="always")
def _fma(acc, a, b, p, qm1, tab):
    """acc + a*b."""
    if a == 0 or b == 0:
        return acc
    L = 2 * qm1
    v = tab[tab[L + a] + tab[L + b]]
    if p == 2:
        return acc ^ v
    if acc == 0:
        return v
    la = tab[L + acc]
    d = tab[L + v] - la
    if d < 0:
        d += qm1
    z = tab[3 * qm1 + 1 + d]
    if z < 0:
        return 0
    return tab[la + z]


@njit(cache=True, inline="always")
def _inv(a, qm1, tab):
    return tab[(qm1 - tab[2 * qm1 + a]) % qm1]


@njit(cache=True, inline="always")
def _pow(a, e, qm1, tab):
    if e == 0:
        return 1
    if a == 0:
        return 0
    return tab[(tab[2 * qm1 + a] * (e % qm1)) % qm1]


@njit(cache=True, inline="always")
def _frob(a, p, qm1, tab):
    """a^p."""
    if a == 0:
        return 0
    return tab[(tab[2 * qm1 + a] * p) % qm1]


# -- scalar ops on T (convenience, not for inner loops) ----------------------------

@njit(cache=True)
def fmul(a, b, T):
    return _mul(a, b, T[1], T[2])


@njit(cache=True)
def fadd(a, b, T):
    return _add(a, b, T[0], T[1], T[2])


@njit(cache=True)
def fsub(a, b, T):
    return _add(a, _neg(b, T[1], T[2]), T[0], T[1], T[2])


@njit(cache=True)
def finv(a, T):
    return _inv(a, T[1], T[2])


@njit(cache=True)
def fpow(a, e, T):
    return _pow(a, e, T[1], T[2])


@njit(cache=True)
def build_exp(p, m, modulus, g, qm1):
    """exp[k] = g^k for k < 2*qm1, by repeated multiplication in polynomial basis."""
    exp = np.empty(2 * qm1, dtype=np.int64)
    gd = np.zeros(m, dtype=np.int64)
    v = g
    for i in range(m):
        gd[i] = v % p
        v //= p
    cur = np.zeros(m, dtype=np.int64)
    cur[0] = 1
    prod = np.zeros(2 * m, dtype=np.int64)
    for k in range(qm1):
        val = 0
        for i in range(m - 1, -1, -1):
            val = val * p + cur[i]
        exp[k] = val
        prod[:] = 0
        for i in range(m):
            if cur[i] != 0:
                for j in range(m):
                    prod[i + j] += cur[i] * gd[j]
        for kk in range(2 * m - 2, m - 1, -1):
            c = prod[kk] % p
            if c != 0:
                for i in range(m + 1):
                    prod[kk - m + i] -= c * modulus[i]
        for i in range(m):
            cur[i] = prod[i] % p
    for k in range(qm1):
        exp[qm1 + k] = exp[k]
    return exp


# -- polynomial helpers ------------------------------------------------------

@njit(cache=True)
def pdeg(a):
    for i in range(a.shape[0] - 1, -1, -1):
        if a[i] != 0:
            return i
    return -1


@njit(cache=True)
def make_monic(m, dm, T):
    p, qm1, tab = T
    out = m[: dm + 1].copy()
    inv = _inv(out[dm], qm1, tab)
    for i in range(dm + 1):
        out[i] = _mul(out[i], inv, qm1, tab)
    return out


@njit(cache=True)
def reduce_monic(a, da, m, dm, nz, T):
    """In-place a mod m for monic m of degree dm; nz lists the nonzero j < dm of m."""
    p, qm1, tab = T
    NG = 4 * qm1 + 1
    for k in range(da, dm - 1, -1):
        c = a[k]
        if c != 0:
            a[k] = 0
            nc = tab[NG + c]
            base = k - dm
            for t in range(nz.shape[0]):
                j = nz[t]
                a[base + j] = _fma(a[base + j], nc, m[j], p, qm1, tab)


@njit(cache=True)
def nonzero_low(m, dm):
    cnt = 0
    for j in range(dm):
        if m[j] != 0:
            cnt += 1
    nz = np.empty(cnt, dtype=np.int64)
    cnt = 0
    for j in range(dm):
        if m[j] != 0:
            nz[cnt] = j
            cnt += 1
    return nz


@njit(cache=True)
def poly_rem(a, b, T):
    """Remainder of a by b (b nonzero); returns a new array trimmed to len(b)-1."""
    a = a.copy()
    da = pdeg(a)
    db = pdeg(b)
    mb = make_monic(b, db, T)
    reduce_monic(a, da, mb, db, nonzero_low(mb, db), T)
    n = db if db > 0 else 1
    return a[:n].copy()


@njit(cache=True)
def gcd_degree(a, b, T):
    a = a.copy()
    b = b.copy()
    while pdeg(b) >= 0:
        r = poly_rem(a, b, T)
        a = b
        b = r
    return pdeg(a)


@njit(cache=True)
def mul_binomial(res, dres, c1, e, c0, T):
    """res * (c1 x^e + c0) in place; res must have room for dres + e + 1 coefficients."""
    p, qm1, tab = T
    old = res[: dres + 1].copy()
    for i in range(dres + 1):
        res[i] = _mul(old[i], c0, qm1, tab)
    for i in range(dres + 1, dres + e + 1):
        res[i] = 0
    for i in range(dres + 1):
        res[i + e] = _fma(res[i + e], c1, old[i], p, qm1, tab)
    return dres + e


@njit(cache=True)
def line_poly(tx, ty, tc, alpha, beta, T, dmax):
    """F(x, alpha*x + beta) for F = sum tc * x^tx * y^ty; array of length dmax + 1.

    (alpha x + beta)^b is built from the base-p digits of b, using
    (alpha x + beta)^{p^k} = alpha^{p^k} x^{p^k} + beta^{p^k}.
    """
    p, qm1, tab = T
    out = np.zeros(dmax + 1, dtype=np.int64)
    tmp = np.zeros(dmax + 1, dtype=np.int64)
    for t in range(tx.shape[0]):
        tmp[:] = 0
        tmp[0] = 1
        d = 0
        b = ty[t]
        pk = 1
        ak = alpha
        bk = beta
        while b > 0:
            digit = b % p
            for _ in range(digit):
                d = mul_binomial(tmp, d, ak, pk, bk, T)
            b //= p
            pk *= p
            ak = _frob(ak, p, qm1, tab)
            bk = _frob(bk, p, qm1, tab)
        a = tx[t]
        c = tc[t]
        for i in range(d + 1):
            out[i + a] = _fma(out[i + a], c, tmp[i], p, qm1, tab)
    return out


@njit(cache=True)
def count_roots_gcd(m, T, steps):
    """deg gcd(m, x^Q - x), with x^Q obtained by `steps` p-th powerings mod m.

    Returns -1 when m is the zero polynomial.
    """
    p, qm1, tab = T
    dm = pdeg(m)
    if dm < 0:
        return -1
    if dm == 0:
        return 0
    mm = make_monic(m, dm, T)
    nz = nonzero_low(mm, dm)
    size = p * (dm - 1) + 2
    h = np.zeros(size, dtype=np.int64)
    h[1] = 1
    reduce_monic(h, 1, mm, dm, nz, T)
    buf = np.zeros(size, dtype=np.int64)
    for _ in range(steps):
        buf[:] = 0
        for i in range(dm):
            buf[i * p] = _frob(h[i], p, qm1, tab)
        reduce_monic(buf, p * (dm - 1), mm, dm, nz, T)
        h[:] = buf
    g = np.zeros(max(dm, 2), dtype=np.int64)
    for i in range(min(dm, g.shape[0])):
        g[i] = h[i]
    g[1] = _add(g[1], _neg(1, qm1, tab), p, qm1, tab)
    return gcd_degree(mm, g, T)


@njit(cache=True)
def batch_counts_gcd(tx, ty, tc, alphas, betas, T, steps, dmax):
    n = alphas.shape[0]
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        m = line_poly(tx, ty, tc, alphas[i], betas[i], T, dmax)
        out[i] = count_roots_gcd(m, T, steps)
    return out


@njit(cache=True)
def eval_bipoly(tx, ty, tc, x, y, T):
    p, qm1, tab = T
    L = 2 * qm1
    acc = 0
    for t in range(tx.shape[0]):
        a = tx[t]
        b = ty[t]
        if (a > 0 and x == 0) or (b > 0 and y == 0):
            continue
        e = tab[L + tc[t]]
        if a > 0:
            e += (a % qm1) * tab[L + x]
        if b > 0:
            e += (b % qm1) * tab[L + y]
        acc = _add(acc, tab[e % qm1], p, qm1, tab)
    return acc


@njit(cache=True)
def batch_counts_brute(tx, ty, tc, alphas, betas, T):
    """For each line, count x0 with F(x0, alpha*x0 + beta) = 0 by enumeration."""
    p, qm1, tab = T
    Q = qm1 + 1
    n = alphas.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        cnt = 0
        for x in range(Q):
            y = _fma(betas[i], alphas[i], x, p, qm1, tab)
            if eval_bipoly(tx, ty, tc, x, y, T) == 0:
                cnt += 1
        out[i] = cnt
    return out


@njit(cache=True)
def curve_zero_mask(tx, ty, tc, T):
    Q = T[1] + 1
    mask = np.zeros((Q, Q), dtype=np.bool_)
    for x in range(Q):
        for y in range(Q):
            if eval_bipoly(tx, ty, tc, x, y, T) == 0:
                mask[x, y] = True
    return mask


# -- monomial reduction along lines -----------------------------------------

@njit(cache=True)
def _step_x(Tp, mm, dm, nz, T):
    """Tp <- x * Tp mod mm (deg Tp < dm)."""
    p, qm1, tab = T
    c = Tp[dm - 1]
    for i in range(dm - 1, 0, -1):
        Tp[i] = Tp[i - 1]
    Tp[0] = 0
    if c != 0:
        nc = _neg(c, qm1, tab)
        for t in range(nz.shape[0]):
            j = nz[t]
            Tp[j] = _fma(Tp[j], nc, mm[j], p, qm1, tab)


@njit(cache=True)
def _step_y(S, old, mm, dm, nz, alpha, beta, T):
    """S <- (alpha x + beta) * S mod mm; `old` is scratch of length dm."""
    p, qm1, tab = T
    old[:] = S
    c = _mul(alpha, old[dm - 1], qm1, tab)
    for i in range(dm):
        S[i] = _mul(beta, old[i], qm1, tab)
    for i in range(1, dm):
        S[i] = _fma(S[i], alpha, old[i - 1], p, qm1, tab)
    if c != 0:
        nc = _neg(c, qm1, tab)
        for t in range(nz.shape[0]):
            j = nz[t]
            S[j] = _fma(S[j], nc, mm[j], p, qm1, tab)


@njit(cache=True)
def monomial_degrees(m, alpha, beta, amax, bmax, T):
    """deg of x^a (alpha x + beta)^b mod m for a <= amax, b <= bmax."""
    dm = pdeg(m)
    degs = np.empty((amax + 1, bmax + 1), dtype=np.int64)
    if dm <= 0:
        degs[:, :] = -1
        return degs
    mm = make_monic(m, dm, T)
    nz = nonzero_low(mm, dm)
    S = np.zeros(dm, dtype=np.int64)
    Tp = np.zeros(dm, dtype=np.int64)
    scratch = np.zeros(dm, dtype=np.int64)
    S[0] = 1
    for b in range(bmax + 1):
        Tp[:] = S
        for a in range(amax + 1):
            degs[a, b] = pdeg(Tp)
            _step_x(Tp, mm, dm, nz, T)
        _step_y(S, scratch, mm, dm, nz, alpha, beta, T)
    return degs


@njit(cache=True)
def monomial_remainders(m, alpha, beta, amax, bmax, T):
    """Full remainders, shape (amax+1, bmax+1, deg m)."""
    dm = pdeg(m)
    out = np.zeros((amax + 1, bmax + 1, max(dm, 1)), dtype=np.int64)
    if dm <= 0:
        return out
    mm = make_monic(m, dm, T)
    nz = nonzero_low(mm, dm)
    S = np.zeros(dm, dtype=np.int64)
    Tp = np.zeros(dm, dtype=np.int64)
    scratch = np.zeros(dm, dtype=np.int64)
    S[0] = 1
    for b in range(bmax + 1):
        Tp[:] = S
        for a in range(amax + 1):
            out[a, b, :] = Tp
            _step_x(Tp, mm, dm, nz, T)
        _step_y(S, scratch, mm, dm, nz, alpha, beta, T)
    return out


@njit(cache=True)
def worst_degrees(tx, ty, tc, alphas, betas, amax, bmax, T, dmax):
    """Max over the given lines of deg(x^a y^b mod m_line)."""
    worst = np.full((amax + 1, bmax + 1), -1, dtype=np.int64)
    for i in range(alphas.shape[0]):
        m = line_poly(tx, ty, tc, alphas[i], betas[i], T, dmax)
        degs = monomial_degrees(m, alphas[i], betas[i], amax, bmax, T)
        for a in range(amax + 1):
            for b in range(bmax + 1):
                if degs[a, b] > worst[a, b]:
                    worst[a, b] = degs[a, b]
    return worst


# -- linear algebra ----------------------------------------------------------

@njit(cache=True)
def rref(M, T, full):
    """In-place row reduction; returns pivot columns.  full=False stops at echelon form.

    Pivot choice is the first nonzero entry at or below the current row.
    """
    p, qm1, tab = T
    rows, cols = M.shape
    piv = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        pr = -1
        for i in range(r, rows):
            if M[i, c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(cols):
                tmp = M[r, j]
                M[r, j] = M[pr, j]
                M[pr, j] = tmp
        inv = _inv(M[r, c], qm1, tab)
        for j in range(c, cols):
            M[r, j] = _mul(M[r, j], inv, qm1, tab)
        start = 0 if full else r + 1
        for i in range(start, rows):
            if i != r:
                f = M[i, c]
                if f != 0:
                    nf = _neg(f, qm1, tab)
                    for j in range(c, cols):
                        M[i, j] = _fma(M[i, j], nf, M[r, j], p, qm1, tab)
        piv[r] = c
        r += 1
    return piv[:r].copy()


@njit(cache=True)
def reduce_vectors(R, piv, W, T):
    """Reduce each row of W against RREF rows R (pivot columns piv), in place."""
    p, qm1, tab = T
    for w in range(W.shape[0]):
        for i in range(piv.shape[0]):
            c = piv[i]
            f = W[w, c]
            if f != 0:
                nf = _neg(f, qm1, tab)
                for j in range(c, R.shape[1]):
                    W[w, j] = _fma(W[w, j], nf, R[i, j], p, qm1, tab)


@njit(cache=True)
def matmul(A, B, T):
    p, qm1, tab = T
    n, k = A.shape
    m = B.shape[1]
    out = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        for t in range(k):
            a = A[i, t]
            if a != 0:
                for j in range(m):
                    out[i, j] = _fma(out[i, j], a, B[t, j], p, qm1, tab)
    return out


# -- interpolation -----------------------------------------------------------

@njit(cache=True)
def lagrange_weights(xs, target, T):
    """w_j with sum_j w_j g(xs[j]) = g(target) for deg g < len(xs); target not in xs.

    Products are accumulated as sums of logs.
    """
    p, qm1, tab = T
    L = 2 * qm1
    k = xs.shape[0]
    w = np.empty(k, dtype=np.int64)
    dlog = np.empty(k, dtype=np.int64)
    total = 0
    for t in range(k):
        dlog[t] = tab[L + _add(target, _neg(xs[t], qm1, tab), p, qm1, tab)]
        total += dlog[t]
    for j in range(k):
        den = 0
        xj = xs[j]
        for t in range(k):
            if t != j:
                den += tab[L + _add(xj, _neg(xs[t], qm1, tab), p, qm1, tab)]
        w[j] = tab[(total - dlog[j] - den) % qm1]
    return w


@njit(cache=True)
def batch_weights(node_x, target_x, T):
    P, k = node_x.shape
    out = np.empty((P, k), dtype=np.int64)
    for i in range(P):
        out[i, :] = lagrange_weights(node_x[i], target_x[i], T)
    return out


@njit(cache=True)
def apply_plans(words, idx, w, T):
    """out[c, i] = sum_j w[i, j] * words[c, idx[i, j]]."""
    p, qm1, tab = T
    W = words.shape[0]
    P, k = idx.shape
    out = np.zeros((W, P), dtype=np.int64)
    for c in range(W):
        for i in range(P):
            acc = 0
            for j in range(k):
                acc = _fma(acc, w[i, j], words[c, idx[i, j]], p, qm1, tab)
            out[c, i] = acc
    return out

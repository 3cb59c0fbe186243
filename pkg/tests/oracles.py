"""Brute-force reference implementations, written without the package's
bitmask machinery. Only for tiny inputs."""

import itertools


def brute_downsets(n, leq):
    """All subsets of range(n) closed downward under leq(i, j) meaning i <= j."""
    out = []
    for r in range(n + 1):
        for combo in itertools.combinations(range(n), r):
            s = set(combo)
            if all(i in s for j in s for i in range(n) if leq(i, j)):
                out.append(frozenset(s))
    return out


def order_from_sets(sets):
    return [[a <= b for b in sets] for a in sets]


def brute_meet(leq, a, b):
    n = len(leq)
    lower = [c for c in range(n) if leq[c][a] and leq[c][b]]
    return next(c for c in lower if all(leq[d][c] for d in lower))


def brute_join(leq, a, b):
    n = len(leq)
    upper = [c for c in range(n) if leq[a][c] and leq[b][c]]
    return next(c for c in upper if all(leq[c][d] for d in upper))


def brute_imp(leq, a, b):
    """Largest w with a & w <= b, by search."""
    n = len(leq)
    ok = [w for w in range(n) if leq[brute_meet(leq, a, w)][b]]
    return next(w for w in ok if all(leq[v][w] for v in ok))


def brute_complemented(leq):
    n = len(leq)
    bot = next(i for i in range(n) if all(leq[i][j] for j in range(n)))
    top = next(i for i in range(n) if all(leq[j][i] for j in range(n)))
    return sorted(
        a for a in range(n)
        if any(brute_meet(leq, a, b) == bot and brute_join(leq, a, b) == top for b in range(n))
    )


def brute_is_nucleus(leq, t):
    n = len(leq)
    return (
        all(leq[x][t[x]] for x in range(n))
        and all(t[t[x]] == t[x] for x in range(n))
        and all(t[brute_meet(leq, x, y)] == brute_meet(leq, t[x], t[y]) for x in range(n) for y in range(n))
    )


def brute_nuclei(leq):
    n = len(leq)
    return sorted(t for t in itertools.product(range(n), repeat=n) if brute_is_nucleus(leq, t))


def brute_is_hom(src_leq, tgt_leq, t):
    n, m = len(src_leq), len(tgt_leq)
    sb = next(i for i in range(n) if all(src_leq[i][j] for j in range(n)))
    st = next(i for i in range(n) if all(src_leq[j][i] for j in range(n)))
    tb = next(i for i in range(m) if all(tgt_leq[i][j] for j in range(m)))
    tt = next(i for i in range(m) if all(tgt_leq[j][i] for j in range(m)))
    if t[sb] != tb or t[st] != tt:
        return False
    return all(
        t[brute_meet(src_leq, a, b)] == brute_meet(tgt_leq, t[a], t[b])
        and t[brute_join(src_leq, a, b)] == brute_join(tgt_leq, t[a], t[b])
        for a in range(n) for b in range(n)
    )


def brute_homs(src_leq, tgt_leq):
    return sorted(
        t for t in itertools.product(range(len(tgt_leq)), repeat=len(src_leq))
        if brute_is_hom(src_leq, tgt_leq, t)
    )


def brute_right_adjoint(src_leq, tgt_leq, t):
    """g(x) = greatest y with t(y) <= x."""
    out = []
    for x in range(len(tgt_leq)):
        ok = [y for y in range(len(src_leq)) if tgt_leq[t[y]][x]]
        out.append(next(y for y in ok if all(src_leq[z][y] for z in ok)))
    return tuple(out)

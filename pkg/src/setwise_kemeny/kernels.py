"""Hot loops: tallies, ranking scores, exhaustive search, subset DP,
branch-and-bound, and the simulation PRNG.

Every kernel has a loop implementation compiled by numba and a numpy
implementation used when numba is disabled (``SETWISE_KEMENY_NO_NUMBA=1``).
The branch-and-bound search is inherently sequential; without numba it runs
as interpreted python over numpy arrays.

Score decomposition used throughout: placing candidate ``c`` on top of the
still-unplaced set ``R`` costs

    sum_{r in R-c} before[r, c]  +  sum_{a<b in R-c} (m - top[c, a, b])   (k=3)

and the k-wise distance of a ranking to the profile is the sum of these costs
along the ranking.
"""

import numpy as np

from ._accel import USE_NUMBA, njit

INF = np.iinfo(np.int64).max // 4

# ---------------------------------------------------------------- tallies


@njit
def _pair_tally_loop(orders, weights, n):
    before = np.zeros((n, n), dtype=np.int64)
    for v in range(orders.shape[0]):
        w = weights[v]
        for i in range(n):
            a = orders[v, i]
            for j in range(i + 1, n):
                before[a, orders[v, j]] += w
    return before


@njit
def _triple_tally_loop(orders, weights, n):
    top = np.zeros((n, n, n), dtype=np.int64)
    for v in range(orders.shape[0]):
        w = weights[v]
        for i in range(n):
            a = orders[v, i]
            for j in range(i + 1, n):
                b = orders[v, j]
                for l in range(j + 1, n):
                    c = orders[v, l]
                    top[a, b, c] += w
                    top[a, c, b] += w
    return top


def _positions(orders):
    pos = np.empty_like(orders)
    rows = np.arange(orders.shape[0])[:, None]
    pos[rows, orders] = np.arange(orders.shape[1])[None, :]
    return pos


def _pair_tally_np(orders, weights, n):
    pos = _positions(orders)
    ahead = (pos[:, :, None] < pos[:, None, :]).astype(np.int64)
    return np.einsum("v,vab->ab", weights, ahead)


def _triple_tally_np(orders, weights, n):
    pos = _positions(orders)
    ahead = (pos[:, :, None] < pos[:, None, :]).astype(np.int64)
    top = np.einsum("v,vab,vac->abc", weights, ahead, ahead)
    # a == b or a == c entries are meaningless; zero the b == c diagonal too
    idx = np.arange(n)
    top[:, idx, idx] = 0
    return top


def pair_tally(orders, weights, n):
    orders = np.ascontiguousarray(orders, dtype=np.int64)
    weights = np.ascontiguousarray(weights, dtype=np.int64)
    if USE_NUMBA:
        return _pair_tally_loop(orders, weights, n)
    return _pair_tally_np(orders, weights, n)


def triple_tally(orders, weights, n):
    orders = np.ascontiguousarray(orders, dtype=np.int64)
    weights = np.ascontiguousarray(weights, dtype=np.int64)
    if USE_NUMBA:
        return _triple_tally_loop(orders, weights, n)
    return _triple_tally_np(orders, weights, n)


# ---------------------------------------------------------------- scoring


@njit
def _score_orders_loop(orders, before, top, m, k):
    count, n = orders.shape
    out = np.zeros(count, dtype=np.int64)
    for r in range(count):
        s = 0
        for i in range(n):
            c = orders[r, i]
            for j in range(i + 1, n):
                s += before[orders[r, j], c]
            if k == 3:
                for j in range(i + 1, n):
                    a = orders[r, j]
                    for l in range(j + 1, n):
                        s += m - top[c, a, orders[r, l]]
        out[r] = s
    return out


def _score_orders_np(orders, before, top, m, k, chunk=20000):
    count, n = orders.shape
    out = np.empty(count, dtype=np.int64)
    chunk = max(1, min(chunk, 4_000_000 // max(1, n * n)))
    if k == 3:
        tri_w = (m - top).astype(np.int64)
        idx = np.arange(n)
        tri_w[:, idx, idx] = 0
    for start in range(0, count, chunk):
        pos = _positions(orders[start : start + chunk])
        ahead = pos[:, :, None] < pos[:, None, :]
        s = np.einsum("rab,ba->r", ahead.astype(np.int64), before)
        if k == 3:
            a64 = ahead.astype(np.int64)
            # ordered pairs (a, b) both after w count each triple twice
            s += np.einsum("rwa,rwb,wab->r", a64, a64, tri_w, optimize=True) // 2
        out[start : start + chunk] = s
    return out


def score_orders(orders, before, top, m, k):
    """k-wise distance (k in {2, 3}) of each row of ``orders`` to the profile."""
    orders = np.ascontiguousarray(np.atleast_2d(orders), dtype=np.int64)
    if USE_NUMBA:
        return _score_orders_loop(orders, before, top, m, k)
    return _score_orders_np(orders, before, top, m, k)


# ---------------------------------------------------------------- exhaustive search


@njit
def _place_cost(c, placed, n, before, top, m, k):
    s = 0
    for r in range(n):
        if r != c and not (placed >> r) & 1:
            s += before[r, c]
    if k == 3:
        for a in range(n):
            if a == c or (placed >> a) & 1:
                continue
            for b in range(a + 1, n):
                if b == c or (placed >> b) & 1:
                    continue
                s += m - top[c, a, b]
    return s


@njit
def _enumerate_loop(before, top, m, k, n, target, out):
    """Walk all n! rankings in lexicographic order.

    With ``target < 0`` returns (best score, number of rankings attaining it).
    Otherwise writes every ranking whose score equals ``target`` into ``out``.
    """
    order = np.zeros(n, dtype=np.int64)
    nxt = np.zeros(n + 1, dtype=np.int64)
    cost = np.zeros(n + 1, dtype=np.int64)
    placed = 0
    depth = 0
    best = INF
    hits = 0
    while depth >= 0:
        if depth == n:
            s = cost[n]
            if target < 0:
                if s < best:
                    best = s
                    hits = 1
                elif s == best:
                    hits += 1
            elif s == target:
                for i in range(n):
                    out[hits, i] = order[i]
                hits += 1
            depth -= 1
            placed &= ~(1 << order[depth])
            continue
        c = nxt[depth]
        while c < n and (placed >> c) & 1:
            c += 1
        if c == n:
            nxt[depth] = 0
            depth -= 1
            if depth >= 0:
                placed &= ~(1 << order[depth])
            continue
        nxt[depth] = c + 1
        cost[depth + 1] = cost[depth] + _place_cost(c, placed, n, before, top, m, k)
        order[depth] = c
        placed |= 1 << c
        depth += 1
    return best, hits


def _all_orders(n):
    from itertools import permutations

    return np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)


def exhaustive_medians(before, top, m, k, n, collect=True):
    """Return (best score, array of optimal orders in lexicographic order)."""
    if USE_NUMBA:
        best, hits = _enumerate_loop(before, top, m, k, n, -1, np.zeros((1, n), np.int64))
        if not collect:
            return best, None
        out = np.zeros((hits, n), dtype=np.int64)
        _enumerate_loop(before, top, m, k, n, best, out)
        return best, out
    orders = _all_orders(n)
    scores = _score_orders_np(orders, before, top, m, k)
    best = int(scores.min())
    return best, (orders[scores == best] if collect else None)


# ---------------------------------------------------------------- subset DP


@njit
def _dp_loop(before, top, m, k, n):
    full = (1 << n) - 1
    value = np.zeros(full + 1, dtype=np.int64)
    members = np.zeros(n, dtype=np.int64)
    for R in range(1, full + 1):
        size = 0
        for c in range(n):
            if (R >> c) & 1:
                members[size] = c
                size += 1
        best = INF
        for ci in range(size):
            c = members[ci]
            s = value[R ^ (1 << c)]
            for ri in range(size):
                r = members[ri]
                if r != c:
                    s += before[r, c]
            if k == 3:
                for ai in range(size):
                    a = members[ai]
                    if a == c:
                        continue
                    for bi in range(ai + 1, size):
                        b = members[bi]
                        if b == c:
                            continue
                        s += m - top[c, a, b]
            if s < best:
                best = s
        value[R] = best
    return value


def _dp_np(before, top, m, k, n):
    full = (1 << n) - 1
    masks = np.arange(full + 1, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n)) & 1
    # pair_in[R, c] = sum_{r in R} before[r, c]
    pair_in = bits @ before
    tri_in = np.zeros_like(pair_in)
    if k == 3:
        for c in range(n):
            w = (m - top[c]).astype(np.int64)
            w[c, :] = 0
            w[:, c] = 0
            np.fill_diagonal(w, 0)
            tri_in[:, c] = ((bits @ w) * bits).sum(axis=1) // 2
    step = pair_in + tri_in
    popcount = bits.sum(axis=1)
    value = np.zeros(full + 1, dtype=np.int64)
    for p in range(1, n + 1):
        layer = masks[popcount == p]
        cand = np.full((layer.size, n), INF, dtype=np.int64)
        for c in range(n):
            sel = ((layer >> c) & 1).astype(bool)
            rest = layer[sel] ^ (1 << c)
            cand[sel, c] = step[rest, c] + value[rest]
        value[layer] = cand.min(axis=1)
    return value


def dp_value_table(before, top, m, k, n):
    if USE_NUMBA:
        return _dp_loop(before, top, m, k, n)
    return _dp_np(before, top, m, k, n)


@njit
def _dp_backtrack(value, before, top, m, k, n):
    order = np.zeros(n, dtype=np.int64)
    R = (1 << n) - 1
    for depth in range(n):
        placed = ((1 << n) - 1) ^ R
        for c in range(n):
            if not (R >> c) & 1:
                continue
            s = value[R ^ (1 << c)] + _place_cost(c, placed, n, before, top, m, k)
            if s == value[R]:
                order[depth] = c
                R ^= 1 << c
                break
    return order


def dp_median(before, top, m, k, n):
    value = dp_value_table(before, top, m, k, n)
    order = _dp_backtrack(value, before, top, m, k, n)
    return int(value[(1 << n) - 1]), order


# ---------------------------------------------------------------- branch and bound


@njit
def _bnb_loop(
    before,
    top,
    pmin,
    tmin,
    m,
    k,
    n,
    upper,
    pred_mask,
    first_mask,
    c56_x,
    c56_dominators,
    c56_dominated,
    c56_size,
    sm_x,
    sm_z,
):
    """Depth-first search over ranking prefixes, candidates tried in index order.

    Returns (best score, best order, nodes expanded). ``best`` stays at
    ``upper + 1`` when nothing below ``upper + 1`` survives pruning.
    """
    order = np.zeros(n, dtype=np.int64)
    best_order = np.zeros(n, dtype=np.int64)
    pos = np.full(n, -1, dtype=np.int64)
    nxt = np.zeros(n + 1, dtype=np.int64)
    cost = np.zeros(n + 1, dtype=np.int64)
    rest_lb = np.zeros(n + 1, dtype=np.int64)

    lb0 = 0
    for a in range(n):
        for b in range(a + 1, n):
            lb0 += pmin[a, b]
            if k == 3:
                for c in range(b + 1, n):
                    lb0 += tmin[a, b, c]
    rest_lb[0] = lb0

    best = upper + 1
    nodes = 0
    placed = 0
    depth = 0
    while depth >= 0:
        if depth == n:
            if cost[n] < best:
                best = cost[n]
                for i in range(n):
                    best_order[i] = order[i]
            depth -= 1
            pos[order[depth]] = -1
            placed &= ~(1 << order[depth])
            continue
        c = nxt[depth]
        found = False
        while c < n:
            if (placed >> c) & 1:
                c += 1
                continue
            ok = True
            if depth == 0 and not (first_mask >> c) & 1:
                ok = False
            if ok and (pred_mask[c] & ~placed) != 0:
                ok = False
            if ok:
                for j in range(c56_x.shape[0]):
                    if c56_x[j] != c:
                        continue
                    if (c56_dominators[j] & ~placed) != 0:
                        continue
                    size = c56_size[j]
                    if size * (size - 4) > 3 * (n - depth - 1):
                        continue
                    if (c56_dominated[j] & placed) != 0:
                        ok = False
                        break
            if ok:
                for j in range(sm_x.shape[0]):
                    x = sm_x[j]
                    z = sm_z[j]
                    if c == x and (placed >> z) & 1:
                        # z above x forces the shape z x J...
                        if not (depth == 1 and order[0] == z):
                            ok = False
                            break
                    elif c == z and (placed >> x) & 1:
                        below_x = n - pos[x] - 2
                        between = depth - pos[x] - 1
                        if below_x == 5 and between <= 2:
                            ok = False
                            break
            if ok:
                add = 0
                drop = 0
                for r in range(n):
                    if r != c and not (placed >> r) & 1:
                        add += before[r, c]
                        drop += pmin[c, r]
                if k == 3:
                    for a in range(n):
                        if a == c or (placed >> a) & 1:
                            continue
                        for b in range(a + 1, n):
                            if b == c or (placed >> b) & 1:
                                continue
                            add += m - top[c, a, b]
                            drop += tmin[c, a, b]
                nodes += 1
                lb = rest_lb[depth] - drop
                if cost[depth] + add + lb < best:
                    nxt[depth] = c + 1
                    cost[depth + 1] = cost[depth] + add
                    rest_lb[depth + 1] = lb
                    order[depth] = c
                    pos[c] = depth
                    placed |= 1 << c
                    depth += 1
                    found = True
                    break
            c += 1
        if not found:
            nxt[depth] = 0
            depth -= 1
            if depth >= 0:
                pos[order[depth]] = -1
                placed &= ~(1 << order[depth])
    return best, best_order, nodes


def bnb_search(before, top, m, k, n, upper, pred_mask, first_mask, c56, small):
    """Run the branch-and-bound kernel.

    ``c56`` is ``(x, dominators_mask, dominated_mask, |dominators|)`` arrays and
    ``small`` is ``(x, z)`` arrays for the few-candidate shape rules.
    """
    pmin = np.minimum(before, before.T)
    np.fill_diagonal(pmin, 0)
    if k == 3:
        # least disagreement over the three possible tops of {a, b, c}
        tmin = m - np.maximum(np.maximum(top, top.transpose(1, 0, 2)), top.transpose(2, 1, 0))
    else:
        tmin = np.zeros((n, n, n), dtype=np.int64)
    args = (
        before,
        top,
        np.ascontiguousarray(pmin, dtype=np.int64),
        np.ascontiguousarray(tmin, dtype=np.int64),
        m,
        k,
        n,
        upper,
        np.ascontiguousarray(pred_mask, dtype=np.int64),
        first_mask,
        *(np.ascontiguousarray(a, dtype=np.int64) for a in c56),
        *(np.ascontiguousarray(a, dtype=np.int64) for a in small),
    )
    best, order, nodes = _bnb_loop(*args)
    return int(best), order, int(nodes)


# ---------------------------------------------------------------- PRNG and simulation
# SplitMix64 (Steele, Lea, Flood 2014). Trial t of seed s uses the stream
# started from mix64(mix64(s) ^ t); hashing s first keeps the trial ranges of
# nearby seeds from being permutations of each other; a vote is a Fisher-Yates shuffle of 0..n-1 with
# j = next() % (i + 1).

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)


@njit
def _mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit
def _trial_orders(n, m, seed, trial, out):
    state = _mix64(_mix64(np.uint64(seed)) ^ np.uint64(trial))
    for v in range(m):
        for i in range(n):
            out[v, i] = i
        for i in range(n - 1, 0, -1):
            state = state + _GAMMA
            j = np.int64(_mix64(state) % np.uint64(i + 1))
            tmp = out[v, i]
            out[v, i] = out[v, j]
            out[v, j] = tmp


@njit
def _applicability_loop(n, m, seed, start, stop):
    hits = np.zeros((stop - start, 3), dtype=np.bool_)
    orders = np.zeros((m, n), dtype=np.int64)
    before = np.zeros((n, n), dtype=np.int64)
    q2 = n * n - 3 * n + 4
    for t in range(start, stop):
        _trial_orders(n, m, seed, t, orders)
        before[:, :] = 0
        for v in range(m):
            for i in range(n):
                for j in range(i + 1, n):
                    before[orders[v, i], orders[v, j]] += 1
        at = False
        at2 = False
        at3 = False
        for x in range(n):
            for y in range(n):
                if x == y:
                    continue
                b = before[x, y]
                if b == m:
                    at = True
                if b * n > (n - 1) * m:
                    at2 = True
                if b * q2 > (q2 - 1) * m:
                    at3 = True
        hits[t - start, 0] = at
        hits[t - start, 1] = at2
        hits[t - start, 2] = at3
    return hits


def _mix64_np(z):
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def _orders_np(n, m, seed, trials):
    """Vectorised over trials; bit-identical to the numba stream."""
    state = _mix64_np(_mix64_np(np.uint64(seed)) ^ trials.astype(np.uint64))
    out = np.empty((trials.size, m, n), dtype=np.int64)
    rows = np.arange(trials.size)
    for v in range(m):
        perm = np.tile(np.arange(n, dtype=np.int64), (trials.size, 1))
        for i in range(n - 1, 0, -1):
            with np.errstate(over="ignore"):
                state = state + _GAMMA
            j = (_mix64_np(state) % np.uint64(i + 1)).astype(np.int64)
            tmp = perm[:, i].copy()
            perm[:, i] = perm[rows, j]
            perm[rows, j] = tmp
        out[:, v, :] = perm
    return out


def random_orders(n, m, seed, trial=0):
    if USE_NUMBA:
        out = np.zeros((m, n), dtype=np.int64)
        _trial_orders(n, m, np.uint64(seed), np.uint64(trial), out)
        return out
    return _orders_np(n, m, np.uint64(seed), np.array([trial], dtype=np.uint64))[0]


def applicability_bits(n, m, seed, start, stop, chunk=20000):
    """Per-trial (AT, 2AT, 3AT) indicator bits for trials ``start..stop-1``."""
    if USE_NUMBA:
        return _applicability_loop(n, m, np.uint64(seed), start, stop)
    parts = []
    q2 = n * n - 3 * n + 4
    off = ~np.eye(n, dtype=bool)
    for lo in range(start, stop, chunk):
        trials = np.arange(lo, min(stop, lo + chunk), dtype=np.uint64)
        orders = _orders_np(n, m, np.uint64(seed), trials)
        pos = np.empty_like(orders)
        t_idx = np.arange(trials.size)[:, None, None]
        v_idx = np.arange(m)[None, :, None]
        pos[t_idx, v_idx, orders] = np.arange(n)[None, None, :]
        before = (pos[:, :, :, None] < pos[:, :, None, :]).sum(axis=1)
        b = before[:, off]
        parts.append(
            np.stack(
                [
                    (b == m).any(axis=1),
                    (b * n > (n - 1) * m).any(axis=1),
                    (b * q2 > (q2 - 1) * m).any(axis=1),
                ],
                axis=1,
            )
        )
    return np.concatenate(parts, axis=0)

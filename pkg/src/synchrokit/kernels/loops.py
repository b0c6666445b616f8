"""Loop kernels compiled with numba (interpreted when numba is absent).

Subsets are ``int64`` bit masks.  Direct-indexed tables of size ``2**n`` hold
the BFS parent pointers, so these kernels are meant for ``n <= 25``.
"""
import numpy as np

from .._accel import njit


@njit
def popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit
def chunk_table(maps, n):
    """Byte-sliced lookup table for OR-ing per-state masks.

    ``maps[a, q]`` is the mask contributed by state ``q`` under letter ``a``.
    ``tab[a, c, b]`` is the OR of ``maps[a, 8c + i]`` over the set bits ``i`` of
    byte ``b``, so transforming a subset costs ``ceil(n / 8)`` lookups.
    """
    k = maps.shape[0]
    nch = (n + 7) // 8
    tab = np.zeros((k, nch, 256), np.int64)
    for a in range(k):
        for c in range(nch):
            for b in range(1, 256):
                bit = 0
                while not (b >> bit) & 1:
                    bit += 1
                q = 8 * c + bit
                extra = maps[a, q] if q < n else 0
                tab[a, c, b] = tab[a, c, b & (b - 1)] | extra
    return tab


@njit
def apply_chunks(tab, a, mask):
    out = 0
    for c in range(tab.shape[1]):
        out |= tab[a, c, (mask >> (8 * c)) & 255]
    return out


@njit
def subset_bfs(tab, n, starts, lo, hi):
    """Breadth-first search over subsets reachable through ``tab``.

    Starts from every mask in ``starts`` (in order) and stops at the first
    discovered subset whose size lies in ``[lo, hi]``.  Letters are tried in
    index order, the queue is FIFO and the empty set is never expanded.

    Returns ``(end, parent, via)``: ``end`` is the goal mask or -1;
    ``parent[m]`` is the predecessor of ``m`` (a start points to itself, -1
    means unvisited) and ``via[m]`` the letter that produced ``m``.
    """
    size = 1 << n
    parent = np.full(size, -1, np.int32)
    via = np.full(size, -1, np.int8)
    queue = np.empty(min(size, 1024), np.int32)
    tail = 0
    for s in starts:
        if parent[s] != -1:
            continue
        parent[s] = s
        pc = popcount(s)
        if lo <= pc <= hi:
            return s, parent, via
        queue[tail] = s
        tail += 1
    k = tab.shape[0]
    head = 0
    while head < tail:
        cur = queue[head]
        head += 1
        for a in range(k):
            nxt = apply_chunks(tab, a, cur)
            if nxt == 0 or parent[nxt] != -1:
                continue
            parent[nxt] = cur
            via[nxt] = a
            pc = popcount(nxt)
            if lo <= pc <= hi:
                return nxt, parent, via
            if tail == queue.shape[0]:
                grown = np.empty(min(size, 2 * tail), np.int32)
                grown[:tail] = queue[:tail]
                queue = grown
            queue[tail] = nxt
            tail += 1
    return -1, parent, via


@njit
def level_widths(tab, n, start, max_depth):
    """Sizes of the BFS layers around ``start``; stops after the layer that
    contains the full set, at ``max_depth``, or when a layer is empty.

    Returns ``(widths, depth_to_full)`` with ``depth_to_full = -1`` when the
    full set was not reached.
    """
    size = 1 << n
    full = size - 1
    seen = np.zeros(size, np.bool_)
    widths = np.zeros(max_depth + 1, np.int64)
    queue = np.empty(min(size, 1024), np.int32)
    queue[0] = start
    seen[start] = True
    widths[0] = 1
    if start == full:
        return widths[:1].copy(), 0
    lo, hi = 0, 1
    k = tab.shape[0]
    depth = 0
    while depth < max_depth and lo < hi:
        tail = hi
        found = False
        for i in range(lo, hi):
            cur = queue[i]
            for a in range(k):
                nxt = apply_chunks(tab, a, cur)
                if nxt == 0 or seen[nxt]:
                    continue
                seen[nxt] = True
                if nxt == full:
                    found = True
                if tail == queue.shape[0]:
                    grown = np.empty(min(size, 2 * tail), np.int32)
                    grown[:tail] = queue[:tail]
                    queue = grown
                queue[tail] = nxt
                tail += 1
        if tail == hi:
            break
        depth += 1
        widths[depth] = tail - hi
        lo, hi = hi, tail
        if found:
            return widths[: depth + 1].copy(), depth
    return widths[: depth + 1].copy(), -1


@njit
def pair_synchronizing(delta, pred_order, pred_start):
    """Every pair of states can be merged by some word.

    ``pred_order[a]`` lists states sorted by their ``a``-successor and
    ``pred_start[a, r] : pred_start[a, r + 1]`` slices the predecessors of ``r``.
    Runs a backward BFS over unordered pairs from the pairs merged by a letter.
    """
    n, k = delta.shape
    good = np.zeros((n, n), np.bool_)
    qp = np.empty(n * n, np.int64)
    qq = np.empty(n * n, np.int64)
    tail = 0
    for a in range(k):
        for p in range(n):
            for q in range(p + 1, n):
                if delta[p, a] == delta[q, a] and not good[p, q]:
                    good[p, q] = True
                    qp[tail] = p
                    qq[tail] = q
                    tail += 1
    head = 0
    while head < tail:
        r = qp[head]
        s = qq[head]
        head += 1
        for a in range(k):
            for i in range(pred_start[a, r], pred_start[a, r + 1]):
                p = pred_order[a, i]
                for j in range(pred_start[a, s], pred_start[a, s + 1]):
                    q = pred_order[a, j]
                    x, y = (p, q) if p < q else (q, p)
                    if x != y and not good[x, y]:
                        good[x, y] = True
                        qp[tail] = x
                        qq[tail] = y
                        tail += 1
    return tail == n * (n - 1) // 2


# -- census ----------------------------------------------------------------
# Tables are flattened letter-major: flat[a * n + q] = delta[q][a].


@njit
def next_suffix_permutation(flat, start):
    """Advance ``flat[start:]`` to its next lexicographic multiset permutation.

    Returns False (leaving the array unchanged) after the last one.
    """
    end = flat.shape[0]
    i = end - 2
    while i >= start and flat[i] >= flat[i + 1]:
        i -= 1
    if i < start:
        return False
    j = end - 1
    while flat[j] <= flat[i]:
        j -= 1
    flat[i], flat[j] = flat[j], flat[i]
    lo, hi = i + 1, end - 1
    while lo < hi:
        flat[lo], flat[hi] = flat[hi], flat[lo]
        lo += 1
        hi -= 1
    return True


@njit
def next_suffix_odometer(flat, start, n):
    i = flat.shape[0] - 1
    while i >= start:
        if flat[i] < n - 1:
            flat[i] += 1
            return True
        flat[i] = 0
        i -= 1
    return False


@njit
def flat_strongly_connected(flat, n, k):
    succ = np.zeros(n, np.int64)
    pred = np.zeros(n, np.int64)
    for a in range(k):
        for q in range(n):
            r = flat[a * n + q]
            succ[q] |= 1 << r
            pred[r] |= 1 << q
    full = (1 << n) - 1
    for adj in (succ, pred):
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            for q in range(n):
                if (frontier >> q) & 1:
                    nxt |= adj[q]
            frontier = nxt & ~seen
            seen |= frontier
        if seen != full:
            return False
    return True


@njit
def flat_is_canonical(flat, n, k, sperm, sperm_inv, lperm_inv):
    """No state/letter relabeling yields a lexicographically smaller table."""
    nk = n * k
    for si in range(lperm_inv.shape[0]):
        for pi in range(sperm.shape[0]):
            for p in range(nk):
                a = lperm_inv[si, p // n]
                q = sperm_inv[pi, p % n]
                val = sperm[pi, flat[a * n + q]]
                if val < flat[p]:
                    return False
                if val > flat[p]:
                    break
    return True


@njit
def flat_canonical_form(flat, n, k, sperm, sperm_inv, lperm_inv):
    nk = n * k
    best = flat.copy()
    cand = np.empty(nk, flat.dtype)
    for si in range(lperm_inv.shape[0]):
        for pi in range(sperm.shape[0]):
            for p in range(nk):
                a = lperm_inv[si, p // n]
                q = sperm_inv[pi, p % n]
                cand[p] = sperm[pi, flat[a * n + q]]
            for p in range(nk):
                if cand[p] < best[p]:
                    best[:] = cand
                    break
                if cand[p] > best[p]:
                    break
    return best


@njit
def flat_reset_threshold(flat, n, k, stamp, gen, queue):
    """Length of a shortest reset word, or -1; forward BFS from the full set.

    ``stamp`` (size ``2**n``) marks visited masks with ``gen`` so it never
    needs clearing between calls.
    """
    full = (1 << n) - 1
    if n == 1:
        return 0
    stamp[full] = gen
    queue[0] = full
    lo, hi = 0, 1
    depth = 0
    while lo < hi:
        depth += 1
        tail = hi
        for i in range(lo, hi):
            cur = queue[i]
            for a in range(k):
                img = 0
                for q in range(n):
                    if (cur >> q) & 1:
                        img |= 1 << flat[a * n + q]
                if stamp[img] == gen:
                    continue
                if img & (img - 1) == 0:
                    return depth
                stamp[img] = gen
                queue[tail] = img
                tail += 1
        lo, hi = hi, tail
    return -1


@njit
def flat_max_extension(flat, n, k, stamp, gen, queue):
    """Largest shortest-extending-word length over proper nonempty subsets.

    Returns ``(length, next_gen)``; length is -1 if some subset cannot be
    extended at all.
    """
    pre = np.zeros((k, n), np.int64)
    for a in range(k):
        for q in range(n):
            pre[a, flat[a * n + q]] |= 1 << q
    full = (1 << n) - 1
    worst = 0
    for s in range(1, full):
        gen += 1
        size = popcount(s)
        stamp[s] = gen
        queue[0] = s
        lo, hi = 0, 1
        depth = 0
        found = -1
        while lo < hi and found < 0:
            depth += 1
            tail = hi
            for i in range(lo, hi):
                cur = queue[i]
                for a in range(k):
                    nxt = 0
                    for q in range(n):
                        if (cur >> q) & 1:
                            nxt |= pre[a, q]
                    if nxt == 0 or stamp[nxt] == gen:
                        continue
                    if popcount(nxt) > size:
                        found = depth
                        break
                    stamp[nxt] = gen
                    queue[tail] = nxt
                    tail += 1
                if found >= 0:
                    break
            lo, hi = hi, tail
        if found < 0:
            return -1, gen
        if found > worst:
            worst = found
    return worst, gen


@njit
def _push_row(buf, count, row):
    if count == buf.shape[0]:
        grown = np.empty((2 * buf.shape[0], buf.shape[1]), buf.dtype)
        grown[:count] = buf[:count]
        buf = grown
    buf[count] = row
    return buf, count + 1


@njit
def census_shard(n, k, eulerian, iso, prefix, sperm, sperm_inv, lperm_inv,
                 bound, ext_stride):
    """Scan every table whose first entries equal ``prefix``.

    Eulerian mode walks the multiset permutations of ``{0^k, ..., (n-1)^k}``
    (in-degree exactly ``k`` everywhere) and keeps the strongly connected
    ones; general mode walks all ``n**(n k)`` tables.  With ``iso`` only
    canonical tables are kept.

    Returns ``(raw, visited, sync, max_rt, witnesses, violators, kari_bad,
    ext_checked, ext_max, ext_bad, hist)``.
    """
    nk = n * k
    flat = np.empty(nk, np.int64)
    d = prefix.shape[0]
    counts = np.full(n, k, np.int64)
    for i in range(d):
        flat[i] = prefix[i]
        counts[prefix[i]] -= 1
    if eulerian:
        pos = d
        for v in range(n):
            if counts[v] < 0:
                return (0, 0, 0, -1, np.empty((0, nk), np.int8), np.empty((0, nk), np.int8),
                        0, 0, -1, 0, np.zeros(1, np.int64))
            for _ in range(counts[v]):
                flat[pos] = v
                pos += 1
    else:
        flat[d:] = 0

    kari = (n - 1) * (n - 2) + 1
    size = 1 << n
    stamp = np.zeros(size, np.int64)
    queue = np.empty(size, np.int64)
    gen = 0
    hist = np.zeros(n * n * n + 2, np.int64)
    witnesses = np.empty((16, nk), np.int8)
    n_wit = 0
    violators = np.empty((4, nk), np.int8)
    n_viol = 0
    raw = visited = sync = 0
    kari_bad = ext_checked = ext_bad = 0
    max_rt = -1
    ext_max = -1
    while True:
        raw += 1
        keep = True
        if eulerian and not flat_strongly_connected(flat, n, k):
            keep = False
        if keep and iso and not flat_is_canonical(flat, n, k, sperm, sperm_inv, lperm_inv):
            keep = False
        if keep:
            visited += 1
            gen += 1
            rt = flat_reset_threshold(flat, n, k, stamp, gen, queue)
            if rt >= 0:
                sync += 1
                hist[rt] += 1
                if rt > max_rt:
                    max_rt = rt
                    n_wit = 0
                if rt == max_rt:
                    witnesses, n_wit = _push_row(witnesses, n_wit, flat.astype(np.int8))
                if bound >= 0 and rt > bound:
                    violators, n_viol = _push_row(violators, n_viol, flat.astype(np.int8))
                if eulerian:
                    if rt > kari:
                        kari_bad += 1
                    if ext_stride > 0 and (sync - 1) % ext_stride == 0:
                        ext_checked += 1
                        e, gen = flat_max_extension(flat, n, k, stamp, gen, queue)
                        if e > ext_max:
                            ext_max = e
                        if e < 0 or e > n - 1:
                            ext_bad += 1
        if eulerian:
            more = next_suffix_permutation(flat, d)
        else:
            more = next_suffix_odometer(flat, d, n)
        if not more:
            break
    return (raw, visited, sync, max_rt, witnesses[:n_wit].copy(), violators[:n_viol].copy(),
            kari_bad, ext_checked, ext_max, ext_bad, hist)


@njit
def fill_batch(flat, n, k, eulerian, iso, start, sperm, sperm_inv, lperm_inv, out):
    """Write up to ``len(out)`` accepted tables into ``out``, starting from the
    current ``flat`` and advancing it in place.

    Returns ``(accepted, raw, exhausted)``; ``raw`` counts every table looked
    at, accepted or not.
    """
    got = 0
    raw = 0
    while got < out.shape[0]:
        raw += 1
        keep = True
        if eulerian and not flat_strongly_connected(flat, n, k):
            keep = False
        if keep and iso and not flat_is_canonical(flat, n, k, sperm, sperm_inv, lperm_inv):
            keep = False
        if keep:
            out[got] = flat
            got += 1
        if eulerian:
            more = next_suffix_permutation(flat, start)
        else:
            more = next_suffix_odometer(flat, start, n)
        if not more:
            return got, raw, True
    return got, raw, False


def initial_table(n, k, eulerian, prefix):
    """First table (lexicographically) of the shard fixed by ``prefix``, or
    None when the prefix already breaks the in-degree constraint."""
    prefix = np.asarray(prefix, dtype=np.int64)
    nk = n * k
    flat = np.zeros(nk, np.int64)
    flat[: prefix.size] = prefix
    if eulerian:
        counts = k - np.bincount(prefix, minlength=n)
        if (counts < 0).any():
            return None
        flat[prefix.size:] = np.repeat(np.arange(n), counts)
    return flat


def iter_table_batches(n, k, eulerian, iso, prefix, sperm, sperm_inv, lperm_inv, batch=4096):
    """Yield ``(accepted_tables, raw_count)`` chunks for one shard."""
    flat = initial_table(n, k, eulerian, prefix)
    if flat is None:
        return
    out = np.empty((batch, n * k), np.int64)
    start = len(prefix)
    while True:
        got, raw, done = fill_batch(flat, n, k, eulerian, iso, start,
                                    sperm, sperm_inv, lperm_inv, out)
        yield out[:got].copy(), raw
        if done:
            return

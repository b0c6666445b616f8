"""Vectorized numpy kernels with the same contracts as :mod:`.loops`.

BFS runs layer by layer: a whole frontier is pushed through the byte-sliced
lookup tables at once.  Within a layer, children are ordered by (frontier
position, letter) and deduplicated by first occurrence, which reproduces the
FIFO discovery order of the loop kernels exactly, so both families return the
same witnesses.
"""
import numpy as np

_BYTE_BITS = ((np.arange(256)[:, None] >> np.arange(8)) & 1).astype(bool)


def popcount(x):
    return np.bitwise_count(np.asarray(x, dtype=np.int64)).astype(np.int64)


def chunk_table(maps, n):
    maps = np.asarray(maps, dtype=np.int64)
    k = maps.shape[0]
    nch = (n + 7) // 8
    tab = np.zeros((k, nch, 256), np.int64)
    for c in range(nch):
        qs = 8 * c + np.arange(8)
        contrib = np.where(qs < n, maps[:, np.minimum(qs, n - 1)], 0)
        picked = np.where(_BYTE_BITS[None, :, :], contrib[:, None, :], 0)
        tab[:, c, :] = np.bitwise_or.reduce(picked, axis=2)
    return tab


def apply_chunks(tab, a, masks):
    masks = np.asarray(masks, dtype=np.int64)
    out = np.zeros_like(masks)
    for c in range(tab.shape[1]):
        out |= tab[a, c][(masks >> (8 * c)) & 255]
    return out


def _expand(tab, frontier):
    k = tab.shape[0]
    children = np.empty((frontier.size, k), np.int64)
    for a in range(k):
        children[:, a] = apply_chunks(tab, a, frontier)
    return children.ravel()


def subset_bfs(tab, n, starts, lo, hi):
    size = 1 << n
    parent = np.full(size, -1, np.int32)
    via = np.full(size, -1, np.int8)
    frontier = []
    for s in np.asarray(starts, dtype=np.int64).tolist():
        if parent[s] != -1:
            continue
        parent[s] = s
        if lo <= int(s).bit_count() <= hi:
            return s, parent, via
        frontier.append(s)
    frontier = np.array(frontier, dtype=np.int64)
    k = tab.shape[0]
    while frontier.size:
        flat = _expand(tab, frontier)
        cand = np.nonzero((flat != 0) & (parent[flat] == -1))[0]
        if cand.size == 0:
            break
        _, first = np.unique(flat[cand], return_index=True)
        pos = cand[np.sort(first)]
        new = flat[pos]
        parent[new] = frontier[pos // k]
        via[new] = pos % k
        pc = popcount(new)
        hit = np.nonzero((pc >= lo) & (pc <= hi))[0]
        if hit.size:
            return int(new[hit[0]]), parent, via
        frontier = new
    return -1, parent, via


def level_widths(tab, n, start, max_depth):
    size = 1 << n
    full = size - 1
    seen = np.zeros(size, bool)
    seen[start] = True
    widths = [1]
    if start == full:
        return np.array(widths, np.int64), 0
    frontier = np.array([start], np.int64)
    depth = 0
    while depth < max_depth and frontier.size:
        flat = _expand(tab, frontier)
        flat = np.unique(flat[(flat != 0) & ~seen[flat]])
        if flat.size == 0:
            break
        seen[flat] = True
        depth += 1
        widths.append(flat.size)
        if seen[full]:
            return np.array(widths, np.int64), depth
        frontier = flat
    return np.array(widths, np.int64), -1


def pair_synchronizing(delta, pred_order=None, pred_start=None):
    delta = np.asarray(delta)
    n, k = delta.shape
    good = np.zeros((n, n), bool)
    for a in range(k):
        col = delta[:, a]
        good |= col[:, None] == col[None, :]
    while True:
        grown = good.copy()
        for a in range(k):
            col = delta[:, a]
            grown |= good[col[:, None], col[None, :]]
        if np.array_equal(grown, good):
            return bool(good.all())
        good = grown


# -- census ----------------------------------------------------------------


def generate_tables(n, k, eulerian, prefix):
    """All flattened tables starting with ``prefix``, in lexicographic order."""
    prefix = np.asarray(prefix, dtype=np.int64)
    nk = n * k
    rows = prefix[None, :].copy()
    if eulerian:
        counts = k - np.bincount(prefix, minlength=n)[None, :]
        if (counts < 0).any():
            return np.empty((0, nk), np.int64)
        for _ in range(prefix.size, nk):
            parts_rows, parts_counts = [], []
            for v in range(n):
                ok = counts[:, v] > 0
                r = np.concatenate([rows[ok], np.full((ok.sum(), 1), v, np.int64)], axis=1)
                c = counts[ok].copy()
                c[:, v] -= 1
                parts_rows.append(r)
                parts_counts.append(c)
            rows = np.concatenate(parts_rows)
            counts = np.concatenate(parts_counts)
    else:
        free = nk - prefix.size
        tails = np.indices((n,) * free).reshape(free, -1).T if free else np.empty((1, 0), np.int64)
        rows = np.concatenate([np.repeat(rows, tails.shape[0], axis=0), tails], axis=1)
    order = np.lexsort(rows.T[::-1])
    return rows[order]


def batch_strongly_connected(tables, n, k):
    B = tables.shape[0]
    bits = np.left_shift(np.int64(1), tables).reshape(B, k, n)
    succ = np.bitwise_or.reduce(bits, axis=1)
    pred = np.zeros((B, n), np.int64)
    q_bits = np.left_shift(np.int64(1), np.arange(n, dtype=np.int64))
    for a in range(k):
        for q in range(n):
            pred[np.arange(B), tables[:, a * n + q]] |= q_bits[q]
    full = (1 << n) - 1
    ok = np.ones(B, bool)
    for adj in (succ, pred):
        seen = np.ones(B, np.int64)
        for _ in range(n):
            nxt = seen.copy()
            for q in range(n):
                nxt |= np.where((seen >> q) & 1 == 1, adj[:, q], 0)
            seen = nxt
        ok &= seen == full
    return ok


def _relabel_sources(n, k, si, pi, sperm_inv, lperm_inv):
    p = np.arange(n * k)
    return lperm_inv[si, p // n] * n + sperm_inv[pi, p % n]


def batch_is_canonical(tables, n, k, sperm, sperm_inv, lperm_inv):
    B = tables.shape[0]
    canon = np.ones(B, bool)
    if B == 0:
        return canon
    for si in range(lperm_inv.shape[0]):
        for pi in range(sperm.shape[0]):
            live = np.nonzero(canon)[0]
            if live.size == 0:
                return canon
            base = tables[live]
            rel = sperm[pi][base[:, _relabel_sources(n, k, si, pi, sperm_inv, lperm_inv)]]
            diff = rel - base
            nz = diff != 0
            first = nz.argmax(axis=1)
            smaller = diff[np.arange(live.size), first] < 0
            canon[live[smaller]] = False
    return canon


def flat_canonical_form(flat, n, k, sperm, sperm_inv, lperm_inv):
    flat = np.asarray(flat, dtype=np.int64)
    best = flat.copy()
    for si in range(lperm_inv.shape[0]):
        srcs = np.stack([_relabel_sources(n, k, si, pi, sperm_inv, lperm_inv)
                         for pi in range(sperm.shape[0])])
        cands = np.take_along_axis(sperm, flat[srcs], axis=1)
        cands = np.concatenate([cands, best[None, :]])
        best = cands[np.lexsort(cands.T[::-1])[0]].copy()
    return best


def batch_reset_threshold(tables, n, k):
    B = tables.shape[0]
    if n == 1:
        return np.zeros(B, np.int64)
    rt = np.full(B, -1, np.int64)
    size = 1 << n
    full = size - 1
    seen = np.zeros((B, size), bool)
    rows = np.arange(B)
    masks = np.full(B, full, np.int64)
    seen[rows, masks] = True
    depth = 0
    while rows.size:
        depth += 1
        all_rows, all_imgs = [], []
        for a in range(k):
            img = np.zeros(rows.size, np.int64)
            for q in range(n):
                img |= ((masks >> q) & 1) << tables[rows, a * n + q]
            all_rows.append(rows)
            all_imgs.append(img)
        rows = np.concatenate(all_rows)
        imgs = np.concatenate(all_imgs)
        single = (imgs & (imgs - 1)) == 0
        done = np.unique(rows[single])
        rt[done] = depth
        keep = (rt[rows] < 0) & ~seen[rows, imgs]
        key = np.unique(rows[keep] * size + imgs[keep])
        rows, masks = key // size, key % size
        seen[rows, masks] = True
    return rt


def batch_max_extension(tables, n, k, chunk=512):
    """Per table: max over proper nonempty subsets of the shortest extending
    word length (-1 if some subset is not extensible)."""
    B = tables.shape[0]
    out = np.zeros(B, np.int64)
    size = 1 << n
    starts = np.arange(1, size - 1, dtype=np.int64)
    S = starts.size
    if S == 0:
        return out
    start_pc = popcount(starts)
    for lo in range(0, B, chunk):
        tb = tables[lo:lo + chunk]
        b = tb.shape[0]
        pre = np.zeros((b, k, n), np.int64)
        for a in range(k):
            for q in range(n):
                pre[np.arange(b), a, tb[:, a * n + q]] |= np.int64(1) << q
        # one search per (table, start subset)
        pid = np.arange(b * S)
        tab_of = pid // S
        need = start_pc[pid % S]
        dist = np.full(b * S, -1, np.int64)
        seen = np.zeros((b * S, size), bool)
        ids = pid
        masks = starts[pid % S]
        seen[ids, masks] = True
        depth = 0
        while ids.size:
            depth += 1
            all_ids, all_masks = [], []
            for a in range(k):
                nxt = np.zeros(ids.size, np.int64)
                for q in range(n):
                    nxt |= np.where((masks >> q) & 1 == 1, pre[tab_of[ids], a, q], 0)
                all_ids.append(ids)
                all_masks.append(nxt)
            ids = np.concatenate(all_ids)
            masks = np.concatenate(all_masks)
            grew = popcount(masks) > need[ids]
            hit = np.unique(ids[grew])
            dist[hit[dist[hit] < 0]] = depth
            keep = (dist[ids] < 0) & (masks != 0) & ~seen[ids, masks]
            key = np.unique(ids[keep] * size + masks[keep])
            ids, masks = key // size, key % size
            seen[ids, masks] = True
        per = dist.reshape(b, S)
        out[lo:lo + b] = np.where((per < 0).any(axis=1), -1, per.max(axis=1))
    return out


def census_shard(n, k, eulerian, iso, prefix, sperm, sperm_inv, lperm_inv,
                 bound, ext_stride):
    nk = n * k
    tables = generate_tables(n, k, eulerian, prefix)
    raw = tables.shape[0]
    if eulerian:
        tables = tables[batch_strongly_connected(tables, n, k)]
    if iso:
        tables = tables[batch_is_canonical(tables, n, k, sperm, sperm_inv, lperm_inv)]
    visited = tables.shape[0]
    rt = batch_reset_threshold(tables, n, k)
    hist = np.bincount(rt[rt >= 0], minlength=n * n * n + 2).astype(np.int64)
    sync_rows = np.nonzero(rt >= 0)[0]
    sync = sync_rows.size
    max_rt = int(rt.max()) if sync else -1
    witnesses = tables[rt == max_rt].astype(np.int8) if sync else np.empty((0, nk), np.int8)
    violators = (tables[rt > bound].astype(np.int8) if bound >= 0
                 else np.empty((0, nk), np.int8))
    kari_bad = ext_checked = ext_bad = 0
    ext_max = -1
    if eulerian and sync:
        kari_bad = int((rt > (n - 1) * (n - 2) + 1).sum())
        if ext_stride > 0:
            picked = sync_rows[::ext_stride]
            ext = batch_max_extension(tables[picked], n, k)
            ext_checked = picked.size
            ext_max = int(ext.max())
            ext_bad = int(((ext < 0) | (ext > n - 1)).sum())
    return (raw, visited, sync, max_rt, witnesses, violators,
            kari_bad, ext_checked, ext_max, ext_bad, hist)


def iter_table_batches(n, k, eulerian, iso, prefix, sperm, sperm_inv, lperm_inv, batch=4096):
    """Yield ``(accepted_tables, raw_count)`` chunks for one shard."""
    tables = generate_tables(n, k, eulerian, prefix)
    for lo in range(0, tables.shape[0], batch):
        chunk = tables[lo:lo + batch]
        keep = np.ones(chunk.shape[0], bool)
        if eulerian:
            keep &= batch_strongly_connected(chunk, n, k)
        if iso:
            idx = np.nonzero(keep)[0]
            keep[idx] = batch_is_canonical(chunk[idx], n, k, sperm, sperm_inv, lperm_inv)
        yield chunk[keep], chunk.shape[0]

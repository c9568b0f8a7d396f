"""Pure-Python coset kernels.

Same call signatures and results as the compiled ``_ckernels`` module; used when
the extension is not built.  Tables are lists of rows, ``-1`` marks an
undefined entry, column ``c ^ 1`` is the inverse of column ``c``.
"""

BACKEND = "python"


def standardize(table, ncols):
    """Renumber cosets in order of first appearance (row-major from coset 0)."""
    order = [0]
    newnum = {0: 0}
    i = 0
    while i < len(order):
        row = table[order[i]]
        for x in range(ncols):
            y = row[x]
            if y >= 0 and y not in newnum:
                newnum[y] = len(order)
                order.append(y)
        i += 1
    return [[newnum[table[c][x]] for x in range(ncols)] for c in order]


def coset_enumerate(ncols, relators, subgroup, max_cosets):
    """HLT coset enumeration with a lookahead pass when the table is full.

    Returns ``(table, total_defined)``; ``table`` is None when ``max_cosets``
    live rows do not suffice.
    """
    table = [[-1] * ncols]
    parent = [0]
    state = {"defined": 1}

    def find(c):
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def live_count():
        return sum(1 for i in range(len(parent)) if parent[i] == i)

    def coincidence(a, b):
        queue = []

        def merge(u, v):
            u, v = find(u), find(v)
            if u == v:
                return
            if u > v:
                u, v = v, u
            parent[v] = u
            queue.append(v)

        merge(a, b)
        qi = 0
        while qi < len(queue):
            e = queue[qi]
            qi += 1
            row = table[e]
            for x in range(ncols):
                f = row[x]
                if f < 0:
                    continue
                xi = x ^ 1
                if table[f][xi] == e:
                    table[f][xi] = -1
                e1, f1 = find(e), find(f)
                if table[e1][x] >= 0:
                    merge(f1, table[e1][x])
                elif table[f1][xi] >= 0:
                    merge(e1, table[f1][xi])
                else:
                    table[e1][x] = f1
                    table[f1][xi] = e1

    def scan(c, w, fill):
        """Scan ``w`` from coset ``c``; with ``fill`` define cosets until it closes.

        Returns False when a definition was needed but no room was left.
        """
        f, i = c, 0
        b, j = c, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return True
            while j >= i and table[b][w[j] ^ 1] >= 0:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return True
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return True
            if not fill:
                return True
            if len(table) >= max_cosets:
                return False
            define(f, w[i])

    def define(c, x):
        n = len(table)
        table.append([-1] * ncols)
        parent.append(n)
        table[c][x] = n
        table[n][x ^ 1] = c
        state["defined"] += 1

    def lookahead():
        for c in range(len(table)):
            for w in relators:
                if parent[c] != c:
                    break
                scan(c, w, False)

    def compact(cur):
        """Drop dead rows; returns the new index of the first live coset >= cur."""
        live = [i for i in range(len(table)) if parent[i] == i]
        newnum = {old: new for new, old in enumerate(live)}
        newtab = [[newnum[find(y)] if y >= 0 else -1 for y in table[old]] for old in live]
        table[:] = newtab
        parent[:] = list(range(len(live)))
        nxt = len(live)
        for old in range(cur, max(newnum) + 1 if newnum else 0):
            if old in newnum:
                nxt = newnum[old]
                break
        return nxt

    def make_room(cur):
        """Lookahead, then compact; returns the new index of ``cur`` (or the next live coset)."""
        lookahead()
        if live_count() < len(table):
            return compact(cur)
        return None

    def fill_row(c):
        """Scan every relator at ``c`` and define its missing entries.

        Returns the coset index to continue from, or None when out of room.
        """
        while True:
            ok = True
            for w in relators:
                if parent[c] != c:
                    return c
                if not scan(c, w, True):
                    ok = False
                    break
            if ok:
                for x in range(ncols):
                    if parent[c] != c:
                        return c
                    if table[c][x] < 0:
                        if len(table) >= max_cosets:
                            ok = False
                            break
                        define(c, x)
            if ok:
                return c
            c = make_room(c)
            if c is None:
                return None
            if c >= len(table):
                return c - 1

    while True:
        ok = True
        for w in subgroup:
            if not scan(0, w, True):
                ok = False
                break
        if ok:
            break
        if make_room(0) is None:
            return None, state["defined"]
    c = 0
    while c < len(table):
        c = fill_row(c)
        if c is None:
            return None, state["defined"]
        c += 1

    live = [i for i in range(len(table)) if parent[i] == i]
    newnum = {old: new for new, old in enumerate(live)}
    final = [[newnum[find(y)] for y in table[old]] for old in live]
    return standardize(final, ncols), state["defined"]


class _Budget(Exception):
    pass


def low_index_search(ncols, rel_by_col, max_index, max_nodes, prefix, split_depth, normal_only):
    """Backtracking search over standard coset tables with at most ``max_index`` rows.

    ``rel_by_col[x]`` lists relator rotations (of relators and their inverses)
    whose first letter is column ``x``.  Only tables that are least in their
    conjugacy class are reported; with ``normal_only`` only tables invariant
    under every change of base point (normal subgroups) are kept.

    Returns ``(tables, nodes, exhausted, frontier)``; tables are flat row-major lists.
    """
    N = max_index
    tab = [-1] * (N * ncols)
    trail = []
    results = []
    frontier = []
    path = []
    st = {"n": 1, "nodes": 0}

    def setent(c, x, d):
        tab[c * ncols + x] = d
        tab[d * ncols + (x ^ 1)] = c
        trail.append(c * ncols + x)
        trail.append(d * ncols + (x ^ 1))

    def undo(mark):
        while len(trail) > mark:
            tab[trail.pop()] = -1

    def process(queue):
        qi = 0
        while qi < len(queue):
            c, x = queue[qi]
            qi += 1
            for w in rel_by_col[x]:
                L = len(w)
                f, i = c, 0
                while i < L:
                    y = tab[f * ncols + w[i]]
                    if y < 0:
                        break
                    f = y
                    i += 1
                if i == L:
                    if f != c:
                        return False
                    continue
                b, j = c, L - 1
                while j > i:
                    y = tab[b * ncols + (w[j] ^ 1)]
                    if y < 0:
                        break
                    b = y
                    j -= 1
                if j == i:
                    if tab[f * ncols + w[i]] >= 0 or tab[b * ncols + (w[i] ^ 1)] >= 0:
                        return False
                    setent(f, w[i], b)
                    queue.append((f, w[i]))
        return True

    def rebase_cmp(alpha, n, strict_equal):
        """Compare the table re-standardized at ``alpha`` with the table itself.

        Returns -1 (rebased smaller), 1 (larger), 0 (undecided or equal).
        With ``strict_equal`` any decided difference counts as -1.
        """
        mu = [-1] * n
        nu = [-1] * n
        mu[alpha] = 0
        nu[0] = alpha
        nxt = 1
        for beta in range(n):
            src = nu[beta]
            if src < 0:
                return 0
            for x in range(ncols):
                delta = tab[beta * ncols + x]
                g = tab[src * ncols + x]
                if delta < 0 or g < 0:
                    return 0
                m = mu[g]
                if m < 0:
                    m = nxt
                    mu[g] = m
                    nu[m] = g
                    nxt += 1
                if m != delta:
                    if strict_equal:
                        return -1
                    return -1 if m < delta else 1
        return 0

    def acceptable(n):
        for alpha in range(1, n):
            if rebase_cmp(alpha, n, normal_only) < 0:
                return False
        return True

    def first_undefined(n):
        for k in range(n * ncols):
            if tab[k] < 0:
                return k
        return -1

    def node(depth):
        n = st["n"]
        k = first_undefined(n)
        if k < 0:
            results.append(tab[: n * ncols])
            return
        if split_depth and depth == split_depth:
            frontier.append(list(path))
            return
        c, x = divmod(k, ncols)
        xi = x ^ 1
        if depth < len(prefix):
            cands = [prefix[depth]]
        else:
            cands = range(n + 1 if n < N else n)
        for d in cands:
            if d < n and tab[d * ncols + xi] >= 0:
                continue
            if d > n or d >= N:
                continue
            st["nodes"] += 1
            if st["nodes"] > max_nodes:
                raise _Budget
            mark = len(trail)
            if d == n:
                st["n"] = n + 1
            setent(c, x, d)
            if process([(c, x)]) and acceptable(st["n"]):
                path.append(d)
                node(depth + 1)
                path.pop()
            undo(mark)
            st["n"] = n

    exhausted = False
    try:
        node(0)
    except _Budget:
        exhausted = True
    return results, st["nodes"], exhausted, frontier

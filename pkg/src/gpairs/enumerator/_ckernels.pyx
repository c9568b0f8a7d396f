# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled coset kernels; results identical to ``_pykernels``."""

from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memset

from ._pykernels import standardize

BACKEND = "cython"


cdef int* _flatten(list words, int *count, int **offsets) except NULL:
    cdef int total = 0, k = 0, i
    for w in words:
        total += len(w)
    cdef int *flat = <int*> malloc((total + 1) * sizeof(int))
    cdef int *off = <int*> malloc((len(words) + 1) * sizeof(int))
    if flat == NULL or off == NULL:
        raise MemoryError()
    off[0] = 0
    for i, w in enumerate(words):
        for x in w:
            flat[k] = x
            k += 1
        off[i + 1] = k
    count[0] = len(words)
    offsets[0] = off
    return flat


cdef class _Enumerator:
    cdef int ncols, nrows, cap, max_cosets
    cdef long long defined
    cdef int *tab
    cdef int *parent
    cdef int *queue
    cdef int *rel
    cdef int *roff
    cdef int nrel

    def __cinit__(self, int ncols, list relators, int max_cosets):
        self.ncols = ncols
        self.max_cosets = max_cosets
        self.cap = 64 if max_cosets > 64 else max_cosets
        self.tab = <int*> malloc(self.cap * (ncols if ncols else 1) * sizeof(int))
        self.parent = <int*> malloc(self.cap * sizeof(int))
        self.queue = <int*> malloc(self.cap * sizeof(int))
        if self.tab == NULL or self.parent == NULL or self.queue == NULL:
            raise MemoryError()
        self.rel = _flatten(relators, &self.nrel, &self.roff)
        self.nrows = 1
        self.parent[0] = 0
        for x in range(ncols):
            self.tab[x] = -1
        self.defined = 1

    def __dealloc__(self):
        free(self.tab)
        free(self.parent)
        free(self.queue)
        free(self.rel)
        free(self.roff)

    cdef int grow(self) except -1:
        cdef int newcap = self.cap * 2
        if newcap > self.max_cosets:
            newcap = self.max_cosets
        cdef int nc = self.ncols if self.ncols else 1
        cdef int *t = <int*> realloc(self.tab, newcap * nc * sizeof(int))
        if t == NULL:
            raise MemoryError()
        self.tab = t
        t = <int*> realloc(self.parent, newcap * sizeof(int))
        if t == NULL:
            raise MemoryError()
        self.parent = t
        t = <int*> realloc(self.queue, newcap * sizeof(int))
        if t == NULL:
            raise MemoryError()
        self.queue = t
        self.cap = newcap
        return 0

    cdef inline int find(self, int c) nogil:
        cdef int root = c, nxt
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            nxt = self.parent[c]
            self.parent[c] = root
            c = nxt
        return root

    cdef int define(self, int c, int x) except -1:
        if self.nrows >= self.cap:
            self.grow()
        cdef int n = self.nrows, k
        cdef int *row = self.tab + n * self.ncols
        for k in range(self.ncols):
            row[k] = -1
        self.parent[n] = n
        self.nrows += 1
        self.tab[c * self.ncols + x] = n
        row[x ^ 1] = c
        self.defined += 1
        return 0

    cdef void merge(self, int u, int v, int *qlen) nogil:
        u = self.find(u)
        v = self.find(v)
        if u == v:
            return
        if u > v:
            u, v = v, u
        self.parent[v] = u
        self.queue[qlen[0]] = v
        qlen[0] += 1

    cdef void coincidence(self, int a, int b) nogil:
        cdef int qlen = 0, qi = 0, e, x, f, xi, e1, f1, y
        cdef int nc = self.ncols
        cdef int *tab = self.tab
        self.merge(a, b, &qlen)
        while qi < qlen:
            e = self.queue[qi]
            qi += 1
            for x in range(nc):
                f = tab[e * nc + x]
                if f < 0:
                    continue
                xi = x ^ 1
                if tab[f * nc + xi] == e:
                    tab[f * nc + xi] = -1
                e1 = self.find(e)
                f1 = self.find(f)
                y = tab[e1 * nc + x]
                if y >= 0:
                    self.merge(f1, y, &qlen)
                else:
                    y = tab[f1 * nc + xi]
                    if y >= 0:
                        self.merge(e1, y, &qlen)
                    else:
                        tab[e1 * nc + x] = f1
                        tab[f1 * nc + xi] = e1

    cdef int scan(self, int c, int *w, int L, bint fill) except -1:
        """1 = done, 0 = needs a definition but the table is full."""
        cdef int f = c, i = 0, b = c, j = L - 1, y
        cdef int nc = self.ncols
        while True:
            while i <= j:
                y = self.tab[f * nc + w[i]]
                if y < 0:
                    break
                f = y
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return 1
            while j >= i:
                y = self.tab[b * nc + (w[j] ^ 1)]
                if y < 0:
                    break
                b = y
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return 1
            if i == j:
                self.tab[f * nc + w[i]] = b
                self.tab[b * nc + (w[i] ^ 1)] = f
                return 1
            if not fill:
                return 1
            if self.nrows >= self.max_cosets:
                return 0
            self.define(f, w[i])

    cdef int live_count(self):
        cdef int k, n = 0
        for k in range(self.nrows):
            if self.parent[k] == k:
                n += 1
        return n

    cdef void lookahead(self) except *:
        cdef int c, r
        for c in range(self.nrows):
            for r in range(self.nrel):
                if self.parent[c] != c:
                    break
                self.scan(c, self.rel + self.roff[r], self.roff[r + 1] - self.roff[r], False)

    cdef int compact(self, int cur) except -2:
        cdef int nc = self.ncols, k, old, new = 0, x, y, nxt
        cdef int *newnum = <int*> malloc((self.nrows + 1) * sizeof(int))
        if newnum == NULL:
            raise MemoryError()
        for old in range(self.nrows):
            if self.parent[old] == old:
                newnum[old] = new
                new += 1
            else:
                newnum[old] = -1
        nxt = new
        for old in range(cur, self.nrows):
            if newnum[old] >= 0:
                nxt = newnum[old]
                break
        for old in range(self.nrows):
            if newnum[old] < 0:
                continue
            k = newnum[old]
            for x in range(nc):
                y = self.tab[old * nc + x]
                self.tab[k * nc + x] = newnum[self.find(y)] if y >= 0 else -1
        # find() needs the old parent array, so reset it only afterwards
        for k in range(new):
            self.parent[k] = k
        self.nrows = new
        free(newnum)
        return nxt

    cdef int make_room(self, int cur) except -2:
        self.lookahead()
        if self.live_count() < self.nrows:
            return self.compact(cur)
        return -1

    cdef int fill_row(self, int c) except -2:
        cdef int r, x, ok
        cdef int nc = self.ncols
        while True:
            ok = 1
            for r in range(self.nrel):
                if self.parent[c] != c:
                    return c
                if not self.scan(c, self.rel + self.roff[r], self.roff[r + 1] - self.roff[r], True):
                    ok = 0
                    break
            if ok:
                for x in range(nc):
                    if self.parent[c] != c:
                        return c
                    if self.tab[c * nc + x] < 0:
                        if self.nrows >= self.max_cosets:
                            ok = 0
                            break
                        self.define(c, x)
            if ok:
                return c
            c = self.make_room(c)
            if c < 0:
                return -1
            if c >= self.nrows:
                return c - 1

    def run(self, list subgroup):
        cdef int nsub, s, ok, c
        cdef int *soff
        cdef int *sub = _flatten(subgroup, &nsub, &soff)
        try:
            while True:
                ok = 1
                for s in range(nsub):
                    if not self.scan(0, sub + soff[s], soff[s + 1] - soff[s], True):
                        ok = 0
                        break
                if ok:
                    break
                if self.make_room(0) < 0:
                    return None
        finally:
            free(sub)
            free(soff)
        c = 0
        while c < self.nrows:
            c = self.fill_row(c)
            if c < 0:
                return None
            c += 1
        cdef int nc = self.ncols, x, y
        live = [k for k in range(self.nrows) if self.parent[k] == k]
        newnum = {old: new for new, old in enumerate(live)}
        final = []
        for old in live:
            row = []
            for x in range(nc):
                y = self.tab[old * nc + x]
                row.append(newnum[self.find(y)])
            final.append(row)
        return standardize(final, nc)


def coset_enumerate(int ncols, list relators, list subgroup, int max_cosets):
    e = _Enumerator(ncols, [list(r) for r in relators], max_cosets)
    table = e.run([list(w) for w in subgroup])
    return table, e.defined


cdef class _LowIndex:
    cdef int ncols, N, n, normal_only, split_depth, exhausted
    cdef long long nodes, max_nodes
    cdef int *tab
    cdef int *trail
    cdef int ntrail
    cdef int *queue
    cdef int *rel
    cdef int *roff
    cdef int *colstart
    cdef int *mu
    cdef int *nu
    cdef int *path
    cdef list results, frontier, prefix

    def __cinit__(self, int ncols, list rel_by_col, int N, long long max_nodes,
                  list prefix, int split_depth, bint normal_only):
        self.ncols = ncols
        self.N = N
        self.max_nodes = max_nodes
        self.prefix = prefix
        self.split_depth = split_depth
        self.normal_only = normal_only
        size = N * ncols if ncols else 1
        self.tab = <int*> malloc(size * sizeof(int))
        self.trail = <int*> malloc(2 * size * sizeof(int))
        self.queue = <int*> malloc(2 * size * sizeof(int))
        self.mu = <int*> malloc(N * sizeof(int))
        self.nu = <int*> malloc(N * sizeof(int))
        self.path = <int*> malloc((size + 1) * sizeof(int))
        self.colstart = <int*> malloc((ncols + 1) * sizeof(int))
        if (self.tab == NULL or self.trail == NULL or self.queue == NULL or self.mu == NULL
                or self.nu == NULL or self.path == NULL or self.colstart == NULL):
            raise MemoryError()
        for k in range(size):
            self.tab[k] = -1
        flat = []
        cdef int nrel = 0
        for x in range(ncols):
            self.colstart[x] = nrel
            for w in rel_by_col[x]:
                flat.append(w)
                nrel += 1
        self.colstart[ncols] = nrel
        cdef int dummy
        self.rel = _flatten(flat, &dummy, &self.roff)
        self.ntrail = 0
        self.n = 1
        self.nodes = 0
        self.exhausted = 0
        self.results = []
        self.frontier = []

    def __dealloc__(self):
        free(self.tab)
        free(self.trail)
        free(self.queue)
        free(self.mu)
        free(self.nu)
        free(self.path)
        free(self.colstart)
        free(self.rel)
        free(self.roff)

    cdef inline void setent(self, int c, int x, int d) nogil:
        cdef int nc = self.ncols
        self.tab[c * nc + x] = d
        self.tab[d * nc + (x ^ 1)] = c
        self.trail[self.ntrail] = c * nc + x
        self.trail[self.ntrail + 1] = d * nc + (x ^ 1)
        self.ntrail += 2

    cdef inline void undo(self, int mark) nogil:
        while self.ntrail > mark:
            self.ntrail -= 1
            self.tab[self.trail[self.ntrail]] = -1

    cdef bint process(self, int c0, int x0) nogil:
        cdef int qh = 0, qt = 0, c, x, r, L, f, i, b, j, y
        cdef int nc = self.ncols
        cdef int *w
        cdef int *tab = self.tab
        self.queue[qt] = c0
        self.queue[qt + 1] = x0
        qt += 2
        while qh < qt:
            c = self.queue[qh]
            x = self.queue[qh + 1]
            qh += 2
            for r in range(self.colstart[x], self.colstart[x + 1]):
                w = self.rel + self.roff[r]
                L = self.roff[r + 1] - self.roff[r]
                f = c
                i = 0
                while i < L:
                    y = tab[f * nc + w[i]]
                    if y < 0:
                        break
                    f = y
                    i += 1
                if i == L:
                    if f != c:
                        return False
                    continue
                b = c
                j = L - 1
                while j > i:
                    y = tab[b * nc + (w[j] ^ 1)]
                    if y < 0:
                        break
                    b = y
                    j -= 1
                if j == i:
                    if tab[f * nc + w[i]] >= 0 or tab[b * nc + (w[i] ^ 1)] >= 0:
                        return False
                    self.setent(f, w[i], b)
                    self.queue[qt] = f
                    self.queue[qt + 1] = w[i]
                    qt += 2
        return True

    cdef int rebase_cmp(self, int alpha, int n) nogil:
        cdef int nc = self.ncols, beta, src, x, delta, g, m, nxt = 1, k
        for k in range(n):
            self.mu[k] = -1
            self.nu[k] = -1
        self.mu[alpha] = 0
        self.nu[0] = alpha
        for beta in range(n):
            src = self.nu[beta]
            if src < 0:
                return 0
            for x in range(nc):
                delta = self.tab[beta * nc + x]
                g = self.tab[src * nc + x]
                if delta < 0 or g < 0:
                    return 0
                m = self.mu[g]
                if m < 0:
                    m = nxt
                    self.mu[g] = m
                    self.nu[m] = g
                    nxt += 1
                if m != delta:
                    if self.normal_only:
                        return -1
                    return -1 if m < delta else 1
        return 0

    cdef bint acceptable(self, int n) nogil:
        cdef int alpha
        for alpha in range(1, n):
            if self.rebase_cmp(alpha, n) < 0:
                return False
        return True

    cdef int node(self, int depth) except -1:
        cdef int n = self.n, nc = self.ncols, k = -1, kk, c, x, xi, d, dmax, dmin, mark
        for kk in range(n * nc):
            if self.tab[kk] < 0:
                k = kk
                break
        if k < 0:
            self.results.append([self.tab[kk] for kk in range(n * nc)])
            return 0
        if self.split_depth and depth == self.split_depth:
            self.frontier.append([self.path[kk] for kk in range(depth)])
            return 0
        c = k // nc
        x = k % nc
        xi = x ^ 1
        if depth < len(self.prefix):
            dmin = self.prefix[depth]
            dmax = dmin
        else:
            dmin = 0
            dmax = n if n < self.N else n - 1
        for d in range(dmin, dmax + 1):
            if d > n or d >= self.N:
                continue
            if d < n and self.tab[d * nc + xi] >= 0:
                continue
            self.nodes += 1
            if self.nodes > self.max_nodes:
                self.exhausted = 1
                return 1
            mark = self.ntrail
            if d == n:
                self.n = n + 1
                for kk in range(nc):
                    self.tab[n * nc + kk] = -1
            self.setent(c, x, d)
            if self.process(c, x) and self.acceptable(self.n):
                self.path[depth] = d
                if self.node(depth + 1):
                    self.undo(mark)
                    self.n = n
                    return 1
            self.undo(mark)
            self.n = n
        return 0

    def run(self):
        self.node(0)
        return self.results, self.nodes, bool(self.exhausted), self.frontier


def low_index_search(int ncols, list rel_by_col, int max_index, long long max_nodes,
                     list prefix, int split_depth, bint normal_only):
    s = _LowIndex(ncols, rel_by_col, max_index, max_nodes, list(prefix), split_depth, normal_only)
    return s.run()

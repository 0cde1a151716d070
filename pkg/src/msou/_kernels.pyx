# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: bounded formula evaluation over bitmask-encoded
sets, and the exhaustive selection search behind window mixes.

Mirrors ``_fallback.py`` exactly; ``_backend`` picks one at import.
"""
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

DEF K_LEQ = 0
DEF K_LABEL = 1
DEF K_IN = 2
DEF K_NOT = 3
DEF K_AND = 4
DEF K_OR = 5
DEF K_IMPLIES = 6
DEF K_EXP = 7
DEF K_ALLP = 8
DEF K_EXS = 9
DEF K_ALLS = 10
DEF K_U = 11


cdef class CompiledProgram:
    cdef int nnodes, nkids, root, n_pos, n_set
    cdef int *kind
    cdef int *a1
    cdef int *a2
    cdef int *kstart
    cdef int *kcount
    cdef int *kids
    # per-call state
    cdef int *pos_env
    cdef uint64_t *set_env
    cdef uint64_t labmask[64]
    cdef int length
    cdef int u_threshold

    def __cinit__(self, kind, a1, a2, kstart, kcount, kids, int root, int n_pos, int n_set):
        cdef int i
        self.nnodes = len(kind)
        self.nkids = len(kids)
        self.root = root
        self.n_pos = n_pos
        self.n_set = n_set
        self.kind = <int *> malloc(sizeof(int) * max(self.nnodes, 1))
        self.a1 = <int *> malloc(sizeof(int) * max(self.nnodes, 1))
        self.a2 = <int *> malloc(sizeof(int) * max(self.nnodes, 1))
        self.kstart = <int *> malloc(sizeof(int) * max(self.nnodes, 1))
        self.kcount = <int *> malloc(sizeof(int) * max(self.nnodes, 1))
        self.kids = <int *> malloc(sizeof(int) * max(self.nkids, 1))
        self.pos_env = <int *> malloc(sizeof(int) * max(n_pos, 1))
        self.set_env = <uint64_t *> malloc(sizeof(uint64_t) * max(n_set, 1))
        if not (self.kind and self.a1 and self.a2 and self.kstart and self.kcount
                and self.kids and self.pos_env and self.set_env):
            raise MemoryError()
        for i in range(self.nnodes):
            self.kind[i] = kind[i]
            self.a1[i] = a1[i]
            self.a2[i] = a2[i]
            self.kstart[i] = kstart[i]
            self.kcount[i] = kcount[i]
        for i in range(self.nkids):
            self.kids[i] = kids[i]

    def __dealloc__(self):
        free(self.kind)
        free(self.a1)
        free(self.a2)
        free(self.kstart)
        free(self.kcount)
        free(self.kids)
        free(self.pos_env)
        free(self.set_env)

    def evaluate(self, labmasks, int length, pos_values, set_values, int u_threshold):
        cdef int i
        if length > 62:
            raise ValueError("word too long for the bitmask kernel")
        for i in range(64):
            self.labmask[i] = 0
        for i in range(len(labmasks)):
            self.labmask[i] = labmasks[i]
        self.length = length
        self.u_threshold = u_threshold
        for i in range(len(pos_values)):
            self.pos_env[i] = pos_values[i]
        for i in range(len(set_values)):
            self.set_env[i] = set_values[i]
        return bool(self._ev(self.root))

    cdef bint _ev(self, int i) noexcept nogil:
        cdef int k = self.kind[i]
        cdef int j, p, slot, body
        cdef uint64_t m, full
        if k == K_LEQ:
            return self.pos_env[self.a1[i]] <= self.pos_env[self.a2[i]]
        elif k == K_LABEL:
            return (self.labmask[self.a1[i]] >> self.pos_env[self.a2[i]]) & 1
        elif k == K_IN:
            return (self.set_env[self.a2[i]] >> self.pos_env[self.a1[i]]) & 1
        elif k == K_NOT:
            return not self._ev(self.kids[self.kstart[i]])
        elif k == K_AND:
            for j in range(self.kcount[i]):
                if not self._ev(self.kids[self.kstart[i] + j]):
                    return False
            return True
        elif k == K_OR:
            for j in range(self.kcount[i]):
                if self._ev(self.kids[self.kstart[i] + j]):
                    return True
            return False
        elif k == K_IMPLIES:
            if not self._ev(self.kids[self.kstart[i]]):
                return True
            return self._ev(self.kids[self.kstart[i] + 1])
        slot = self.a1[i]
        body = self.kids[self.kstart[i]]
        if k == K_EXP or k == K_ALLP:
            for p in range(self.length):
                self.pos_env[slot] = p
                if self._ev(body):
                    if k == K_EXP:
                        return True
                elif k == K_ALLP:
                    return False
            return k == K_ALLP
        full = ((<uint64_t> 1) << self.length) - 1
        m = 0
        while True:
            if k != K_U or __builtin_popcountll(m) >= self.u_threshold:
                self.set_env[slot] = m
                if self._ev(body):
                    if k != K_ALLS:
                        return True
                elif k == K_ALLS:
                    return False
            if m == full:
                break
            m += 1
        return k == K_ALLS


def mix_search(f_vals, f_offsets, g_vals, g_offsets, long B, long Bp):
    """Least selection of F (lexicographic, last position fastest) such that
    no selection of G gives a (B, Bp)-equivalent number window; None if
    every selection of F is matched."""
    cdef int n = len(f_offsets) - 1
    cdef int i, j
    cdef int64_t *fv = <int64_t *> malloc(sizeof(int64_t) * max(len(f_vals), 1))
    cdef int64_t *gv = <int64_t *> malloc(sizeof(int64_t) * max(len(g_vals), 1))
    cdef int *fo = <int *> malloc(sizeof(int) * (n + 1))
    cdef int *go = <int *> malloc(sizeof(int) * (n + 1))
    cdef int *s = <int *> malloc(sizeof(int) * max(n, 1))
    cdef int *t = <int *> malloc(sizeof(int) * max(n, 1))
    cdef int64_t a, b
    cdef bint matched, ok
    result = None
    try:
        for i in range(len(f_vals)):
            fv[i] = f_vals[i]
        for i in range(len(g_vals)):
            gv[i] = g_vals[i]
        for i in range(n + 1):
            fo[i] = f_offsets[i]
            go[i] = g_offsets[i]
        for i in range(n):
            s[i] = 0
        with nogil:
            while True:
                matched = False
                for i in range(n):
                    t[i] = 0
                while True:
                    ok = True
                    for i in range(n):
                        a = fv[fo[i] + s[i]]
                        b = gv[go[i] + t[i]]
                        if (a <= B and b > Bp) or (b <= B and a > Bp):
                            ok = False
                            break
                    if ok:
                        matched = True
                        break
                    # odometer over G
                    j = n - 1
                    while j >= 0:
                        t[j] += 1
                        if go[j] + t[j] < go[j + 1]:
                            break
                        t[j] = 0
                        j -= 1
                    if j < 0:
                        break
                if not matched:
                    break
                j = n - 1
                while j >= 0:
                    s[j] += 1
                    if fo[j] + s[j] < fo[j + 1]:
                        break
                    s[j] = 0
                    j -= 1
                if j < 0:
                    break
        if not matched:
            result = tuple(s[i] for i in range(n))
    finally:
        free(fv)
        free(gv)
        free(fo)
        free(go)
        free(s)
        free(t)
    return result

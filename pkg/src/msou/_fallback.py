"""Pure-Python twin of ``_kernels.pyx`` (same API, same results)."""
from __future__ import annotations

K_LEQ, K_LABEL, K_IN, K_NOT, K_AND, K_OR, K_IMPLIES, K_EXP, K_ALLP, K_EXS, K_ALLS, K_U = range(12)


class CompiledProgram:
    """Flat formula program turned into nested closures once, then run many
    times against different words and assignments."""

    def __init__(self, kind, a1, a2, kstart, kcount, kids, root, n_pos, n_set):
        self.n_pos = n_pos
        self.n_set = n_set
        self._pos = [0] * max(n_pos, 1)
        self._set = [0] * max(n_set, 1)
        self._lab = [0] * 64
        self._len = [0]
        self._u = [0]
        self._fn = self._build(kind, a1, a2, kstart, kcount, kids, root)

    def _build(self, kind, a1, a2, kstart, kcount, kids, i):
        pos, sets, lab, length, u = self._pos, self._set, self._lab, self._len, self._u
        k = kind[i]
        sub = [self._build(kind, a1, a2, kstart, kcount, kids, kids[kstart[i] + j])
               for j in range(kcount[i])]
        x, y = a1[i], a2[i]
        if k == K_LEQ:
            return lambda: pos[x] <= pos[y]
        if k == K_LABEL:
            return lambda: (lab[x] >> pos[y]) & 1 == 1
        if k == K_IN:
            return lambda: (sets[y] >> pos[x]) & 1 == 1
        if k == K_NOT:
            f = sub[0]
            return lambda: not f()
        if k == K_AND:
            if len(sub) == 2:
                f, g = sub
                return lambda: f() and g()
            return lambda: all(f() for f in sub)
        if k == K_OR:
            if len(sub) == 2:
                f, g = sub
                return lambda: f() or g()
            return lambda: any(f() for f in sub)
        if k == K_IMPLIES:
            f, g = sub
            return lambda: (not f()) or g()
        body = sub[0]
        if k == K_EXP:
            def exists_pos():
                for p in range(length[0]):
                    pos[x] = p
                    if body():
                        return True
                return False
            return exists_pos
        if k == K_ALLP:
            def forall_pos():
                for p in range(length[0]):
                    pos[x] = p
                    if not body():
                        return False
                return True
            return forall_pos
        if k == K_EXS:
            def exists_set():
                for m in range(1 << length[0]):
                    sets[x] = m
                    if body():
                        return True
                return False
            return exists_set
        if k == K_ALLS:
            def forall_set():
                for m in range(1 << length[0]):
                    sets[x] = m
                    if not body():
                        return False
                return True
            return forall_set
        if k == K_U:
            def unbounded():
                need = u[0]
                for m in range(1 << length[0]):
                    if bin(m).count("1") >= need:
                        sets[x] = m
                        if body():
                            return True
                return False
            return unbounded
        raise ValueError(f"bad node kind {k}")

    def evaluate(self, labmasks, length, pos_values, set_values, u_threshold):
        if length > 62:
            raise ValueError("word too long for the bitmask kernel")
        lab = self._lab
        for i in range(64):
            lab[i] = labmasks[i] if i < len(labmasks) else 0
        self._len[0] = length
        self._u[0] = u_threshold
        self._pos[:len(pos_values)] = pos_values
        self._set[:len(set_values)] = set_values
        return bool(self._fn())


def mix_search(f_vals, f_offsets, g_vals, g_offsets, B, Bp):
    """Least selection of F (lexicographic, last position fastest) such that
    no selection of G gives a (B, Bp)-equivalent number window; None if
    every selection of F is matched."""
    n = len(f_offsets) - 1
    f_rows = [f_vals[f_offsets[i]:f_offsets[i + 1]] for i in range(n)]
    g_rows = [g_vals[g_offsets[i]:g_offsets[i + 1]] for i in range(n)]
    s = [0] * n
    while True:
        f = [f_rows[i][s[i]] for i in range(n)]
        t = [0] * n
        matched = False
        while True:
            for i in range(n):
                a = f[i]
                b = g_rows[i][t[i]]
                if (a <= B and b > Bp) or (b <= B and a > Bp):
                    break
            else:
                matched = True
                break
            j = n - 1
            while j >= 0:
                t[j] += 1
                if t[j] < len(g_rows[j]):
                    break
                t[j] = 0
                j -= 1
            if j < 0:
                break
        if not matched:
            return tuple(s)
        j = n - 1
        while j >= 0:
            s[j] += 1
            if s[j] < len(f_rows[j]):
                break
            s[j] = 0
            j -= 1
        if j < 0:
            return None

"""Compiled inner loop for exhaustive DSMC subset search."""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _components(n, adj_start, adj_to, adj_arc, arc_dead, comp, index, low, onstack, stack, work_v, work_i):
    for v in range(n):
        index[v] = -1
        onstack[v] = False
    counter = 0
    ncomp = 0
    sp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = counter
        low[root] = counter
        counter += 1
        stack[sp] = root
        sp += 1
        onstack[root] = True
        wp = 0
        work_v[0] = root
        work_i[0] = adj_start[root]
        wp = 1
        while wp > 0:
            v = work_v[wp - 1]
            e = work_i[wp - 1]
            if e < adj_start[v + 1]:
                work_i[wp - 1] = e + 1
                if arc_dead[adj_arc[e]]:
                    continue
                w = adj_to[e]
                if index[w] == -1:
                    index[w] = counter
                    low[w] = counter
                    counter += 1
                    stack[sp] = w
                    sp += 1
                    onstack[w] = True
                    work_v[wp] = w
                    work_i[wp] = adj_start[w]
                    wp += 1
                elif onstack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            wp -= 1
            if wp > 0:
                u = work_v[wp - 1]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                while True:
                    sp -= 1
                    w = stack[sp]
                    onstack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1


@njit(cache=True)
def search_size(size, n, adj_start, adj_to, adj_arc, n_arcs, obj_is_arc, obj_ref, obj_weight,
                weight_cap, req_s, req_t):
    """First size-``size`` combination (lexicographic) of deletable objects that
    separates every surviving request; ``out[0] == -1`` when none exists."""
    m = obj_is_arc.shape[0]
    out = np.full(max(size, 1), -1, dtype=np.int64)
    if size > m:
        return out
    arc_dead = np.zeros(n_arcs, dtype=np.bool_)
    req_dead = np.zeros(req_s.shape[0], dtype=np.bool_)
    comp = np.empty(n, dtype=np.int64)
    index = np.empty(n, dtype=np.int64)
    low = np.empty(n, dtype=np.int64)
    onstack = np.empty(n, dtype=np.bool_)
    stack = np.empty(n, dtype=np.int64)
    work_v = np.empty(n, dtype=np.int64)
    work_i = np.empty(n, dtype=np.int64)
    idx = np.arange(size)
    while True:
        total = 0
        for j in range(size):
            total += obj_weight[idx[j]]
        if total <= weight_cap:
            for j in range(size):
                o = idx[j]
                if obj_is_arc[o]:
                    arc_dead[obj_ref[o]] = True
                else:
                    req_dead[obj_ref[o]] = True
            _components(n, adj_start, adj_to, adj_arc, arc_dead, comp, index, low, onstack,
                        stack, work_v, work_i)
            ok = True
            for r in range(req_s.shape[0]):
                if not req_dead[r] and comp[req_s[r]] == comp[req_t[r]]:
                    ok = False
                    break
            for j in range(size):
                o = idx[j]
                if obj_is_arc[o]:
                    arc_dead[obj_ref[o]] = False
                else:
                    req_dead[obj_ref[o]] = False
            if ok:
                for j in range(size):
                    out[j] = idx[j]
                if size == 0:
                    out[0] = -2
                return out
        i = size - 1
        while i >= 0 and idx[i] == m - size + i:
            i -= 1
        if i < 0:
            return out
        idx[i] += 1
        for j in range(i + 1, size):
            idx[j] = idx[j - 1] + 1

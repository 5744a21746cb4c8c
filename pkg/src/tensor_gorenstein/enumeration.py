"""Exhaustive enumeration of modules over a finite field, up to isomorphism.

A module with dimension vector ``d`` is a choice of one ``d_t x d_s`` block per
arrow lift.  All blocks are packed into one integer code (base ``p``); codes
violating the algebra's relations are filtered in vectorized batches, and the
survivors are grouped into orbits of the base-change group ``prod GL(d_v)``.
Each orbit is one isomorphism class, represented by its smallest code.
"""

from __future__ import annotations

import itertools

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import FieldUnsupported
from .modcat import LEFT, module_from_generators, zero_module

CHUNK = 1 << 14
MAX_CODES = 1 << 22


def dimension_vectors(n, cap):
    """All dimension vectors with total at most ``cap``: by total, then weight on
    earlier vertices first (so ``S1`` precedes ``S2``)."""
    out = []
    for total in range(cap + 1):
        vecs = [v for v in itertools.product(range(total + 1), repeat=n) if sum(v) == total]
        out.extend(sorted(vecs, reverse=True))
    return out


class _Layout:
    def __init__(self, alg, dvec):
        self.gens = [(s, t) for _, s, t in alg.generators]
        self.d = list(dvec)
        self.shapes = [(self.d[t], self.d[s]) for s, t in self.gens]
        sizes = [r * c for r, c in self.shapes]
        self.offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
        self.nvar = int(self.offsets[-1])
        vo = np.concatenate([[0], np.cumsum(self.d)]).astype(int)
        self.voff = vo
        self.n = int(vo[-1])

    def decode(self, codes, p):
        digits = np.zeros((codes.size, self.nvar), dtype=np.int64)
        c = codes.copy()
        for k in range(self.nvar):
            digits[:, k] = c % p
            c //= p
        return digits

    def encode(self, digits, p):
        weights = p ** np.arange(self.nvar, dtype=np.int64)
        return digits @ weights

    def blocks(self, digits):
        out = []
        for g, (r, c) in enumerate(self.shapes):
            a, b = self.offsets[g], self.offsets[g + 1]
            out.append(digits[:, a:b].reshape(digits.shape[0], r, c))
        return out

    def digits_from_blocks(self, blocks):
        return np.concatenate([b.reshape(b.shape[0], -1) for b in blocks], axis=1) \
            if blocks else np.zeros((0, 0), dtype=np.int64)


def _valid_mask(alg, layout, blocks, p):
    """Check every relation ``gen_g * word_w = sum c word`` on a batch of representations."""
    words, _, relations = alg.word_basis
    b = blocks[0].shape[0] if blocks else 0
    d = layout.d
    # word matrices as maps from the source vertex block to the target block
    wm = []
    for word, src, tgt in words:
        m = np.broadcast_to(np.eye(d[src], dtype=np.int64), (b, d[src], d[src]))
        for g in reversed(word):
            m = np.matmul(blocks[g], m) % p
        wm.append(m)
    ok = np.ones(b, dtype=bool)
    for (g, wi), coeffs in relations.items():
        _, src, tgt = words[wi]
        s, t = layout.gens[g]
        lhs = np.matmul(blocks[g], wm[wi]) % p
        rhs = np.zeros_like(lhs)
        for wj in np.flatnonzero(coeffs):
            ws, wt = words[wj][1], words[wj][2]
            if ws != src or wt != t:
                continue
            rhs = (rhs + int(coeffs[wj]) * wm[wj]) % p
        ok &= np.all((lhs - rhs) % p == 0, axis=(1, 2))
    return ok


def _group_generators(d, p):
    """Generators of ``GL(d_v)`` for each vertex as ``(vertex, g, g_inverse)``."""
    out = []
    prim = _primitive_root(p)
    for v, n in enumerate(d):
        for i in range(n):
            for j in range(n):
                if i != j:
                    g = np.eye(n, dtype=np.int64)
                    g[i, j] = 1
                    gi = np.eye(n, dtype=np.int64)
                    gi[i, j] = p - 1
                    out.append((v, g, gi))
        if n and p > 2:
            g = np.eye(n, dtype=np.int64)
            g[0, 0] = prim
            gi = np.eye(n, dtype=np.int64)
            gi[0, 0] = pow(prim, -1, p)
            out.append((v, g, gi))
    return out


def _primitive_root(p):
    if p == 2:
        return 1
    factors = {q for q in range(2, p) if (p - 1) % q == 0 and all(q % r for r in range(2, q))}
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ValueError(f"no primitive root mod {p}")


def _orbit_representatives(layout, codes, p):
    """Smallest code of every orbit among the (sorted, unique) valid ``codes``."""
    if codes.size <= 1:
        return codes
    digits = layout.decode(codes, p)
    blocks = layout.blocks(digits)
    rows, cols = [], []
    idx = np.arange(codes.size)
    for v, g, gi in _group_generators(layout.d, p):
        moved = []
        for k, (s, t) in enumerate(layout.gens):
            blk = blocks[k]
            if t == v:
                blk = np.matmul(g, blk) % p
            if s == v:
                blk = np.matmul(blk, gi) % p
            moved.append(blk)
        img = layout.encode(layout.digits_from_blocks(moved), p)
        pos = np.searchsorted(codes, img)
        rows.append(idx)
        cols.append(pos)
    if not rows:
        return codes
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)),
                       shape=(codes.size, codes.size))
    ncomp, labels = connected_components(graph, directed=True, connection="weak")
    first = np.full(ncomp, codes.size, dtype=np.int64)
    np.minimum.at(first, labels, idx)
    return codes[np.sort(first)]


def _valid_codes(alg, layout, p):
    total = p ** layout.nvar
    if total > MAX_CODES:
        raise ValueError(f"dimension vector {layout.d} needs {total} codes")
    keep = []
    for start in range(0, total, CHUNK):
        codes = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        blocks = layout.blocks(layout.decode(codes, p))
        mask = _valid_mask(alg, layout, blocks, p) if blocks else np.ones(codes.size, bool)
        keep.append(codes[mask])
    return np.concatenate(keep) if keep else np.zeros(0, dtype=np.int64)


def iter_modules(a, dim_cap, side=LEFT, min_dim=0):
    """Yield one module per isomorphism class, total dimension in ``[min_dim, dim_cap]``."""
    f = a.field
    if f.p is None:
        raise FieldUnsupported("exhaustive enumeration needs a finite field")
    alg = a if side == LEFT else a.opposite()
    p = f.p
    for dvec in dimension_vectors(alg.vertex_count, dim_cap):
        if sum(dvec) < min_dim:
            continue
        if sum(dvec) == 0:
            yield zero_module(a, side)
            continue
        layout = _Layout(alg, dvec)
        codes = _valid_codes(alg, layout, p)
        for code in _orbit_representatives(layout, codes, p):
            digits = layout.decode(np.array([code]), p)
            mats = [b[0] for b in layout.blocks(digits)]
            mod = module_from_generators(a, side, dvec, mats, validate=False)
            mod.label = f"d={''.join(map(str, dvec))}#{int(code)}"
            yield mod


def enumerate_modules(a, dim_cap, side=LEFT, min_dim=0):
    return list(iter_modules(a, dim_cap, side, min_dim))

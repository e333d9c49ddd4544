"""Vectorised fallback for the hot table kernels.

Same interface as the compiled `_fastcheck` extension.  numpy gathers keep
this usable on the big truncation-4 tables (a few hundred million triples),
just several times slower than the C loops.
"""

import numpy as np

IMPL = "numpy"

# Cap on the lhs/rhs gather buffers: chunk * n_bc * n_ab entries.
_CHUNK_CELLS = 4_000_000


def assoc_quad(comp_abc, comp_bcd, comp_acd, comp_abd, start_ac, start_bd):
    """First associativity violation among triples h(gf) vs (hg)f.

    comp_abc[g_loc, f_loc] is the global id of g∘f for f in hom(a,b),
    g in hom(b,c); similarly for the other three blocks.  Returns the flat
    index h_loc * (n_bc * n_ab) + g_loc * n_ab + f_loc of the first violating
    triple, or -1.
    """
    n_bc, n_ab = comp_abc.shape
    n_cd = comp_bcd.shape[0]
    if n_ab == 0 or n_bc == 0 or n_cd == 0:
        return -1
    gf_loc = comp_abc - start_ac
    hg_loc = comp_bcd - start_bd
    chunk = max(1, _CHUNK_CELLS // max(1, n_bc * n_ab))
    for h0 in range(0, n_cd, chunk):
        h1 = min(n_cd, h0 + chunk)
        lhs = comp_acd[h0:h1][:, gf_loc]
        rhs = comp_abd[hg_loc[h0:h1]]
        bad = lhs != rhs
        if bad.any():
            h, g, f = np.unravel_index(int(np.argmax(bad)), bad.shape)
            return (h0 + int(h)) * (n_bc * n_ab) + int(g) * n_ab + int(f)
    return -1


def count_assoc_triples(comp_abc, comp_bcd, comp_acd, comp_abd, start_ac, start_bd):
    n_bc, n_ab = comp_abc.shape
    return n_ab * n_bc * comp_bcd.shape[0]

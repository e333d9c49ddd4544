# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: associativity sweep over composition blocks.

Mirrors the interface of `slowcheck`; selected at import by the package
`__init__` when the extension built.
"""

IMPL = "cython"


def assoc_quad(const int[:, ::1] comp_abc, const int[:, ::1] comp_bcd,
               const int[:, ::1] comp_acd, const int[:, ::1] comp_abd,
               long start_ac, long start_bd):
    """First associativity violation among triples h(gf) vs (hg)f, or -1."""
    cdef Py_ssize_t n_bc = comp_abc.shape[0]
    cdef Py_ssize_t n_ab = comp_abc.shape[1]
    cdef Py_ssize_t n_cd = comp_bcd.shape[0]
    cdef Py_ssize_t f, g, h, gf_loc, hg_loc
    if n_ab == 0 or n_bc == 0 or n_cd == 0:
        return -1
    for h in range(n_cd):
        for g in range(n_bc):
            hg_loc = comp_bcd[h, g] - start_bd
            for f in range(n_ab):
                gf_loc = comp_abc[g, f] - start_ac
                if comp_acd[h, gf_loc] != comp_abd[hg_loc, f]:
                    return h * (n_bc * n_ab) + g * n_ab + f
    return -1


def count_assoc_triples(const int[:, ::1] comp_abc, const int[:, ::1] comp_bcd,
                        const int[:, ::1] comp_acd, const int[:, ::1] comp_abd,
                        long start_ac, long start_bd):
    return comp_abc.shape[1] * comp_abc.shape[0] * comp_bcd.shape[0]

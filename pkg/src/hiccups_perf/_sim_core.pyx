"""Compiled simulation kernel (Cython twin of ``_sim_fallback``).

Identical algorithm, draw order and RNG, so results are bit-identical
with the pure-Python kernel for the same stream seed.
"""

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

cdef uint64_t MASK64 = 0xFFFFFFFFFFFFFFFFULL
cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t _rotl(uint64_t x, int k) nogil:
    return (x << k) | (x >> (64 - k))


cdef inline uint64_t _splitmix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def run_epochs(int64_t n, windows, int64_t m, bint baseline_mode,
               bint error_feedback, double fer, int64_t slots,
               int64_t warmup, object seed):
    """See ``_sim_fallback.run_epochs``; same contract, compiled."""
    cdef uint64_t s0, s1, s2, s3, x, t, z
    cdef int64_t st, i, ns, ntx, epoch, etype
    cdef int64_t attempts = 0, coll_attempts = 0
    cdef int64_t n_idle = 0, n_succ = 0, n_coll = 0, n_err = 0
    cdef bint err, reset
    cdef int64_t nstages = m + 1

    cdef int64_t *win = <int64_t *> malloc(nstages * sizeof(int64_t))
    cdef int64_t *stage = <int64_t *> malloc(n * sizeof(int64_t))
    cdef int64_t *counter = <int64_t *> malloc(n * sizeof(int64_t))
    if win == NULL or stage == NULL or counter == NULL:
        free(win); free(stage); free(counter)
        raise MemoryError()

    try:
        for i in range(nstages):
            win[i] = windows[i]

        z = <uint64_t> (int(seed) & 0xFFFFFFFFFFFFFFFF)
        z = z + GAMMA; s0 = _splitmix64(z)
        z = z + GAMMA; s1 = _splitmix64(z)
        z = z + GAMMA; s2 = _splitmix64(z)
        z = z + GAMMA; s3 = _splitmix64(z)
        if (s0 | s1 | s2 | s3) == 0:
            s0 = GAMMA

        with nogil:
            for st in range(n):
                stage[st] = 0
                x = _rotl(s1 * 5ULL, 7) * 9ULL
                t = s1 << 17
                s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t
                s3 = _rotl(s3, 45)
                counter[st] = <int64_t> (x % (<uint64_t> win[0]))

            for epoch in range(slots):
                ntx = 0
                for st in range(n):
                    if counter[st] == 0:
                        ntx += 1

                if ntx == 0:
                    for st in range(n):
                        counter[st] -= 1
                    etype = 0
                else:
                    err = False
                    if ntx == 1:
                        x = _rotl(s1 * 5ULL, 7) * 9ULL
                        t = s1 << 17
                        s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t
                        s3 = _rotl(s3, 45)
                        err = ((x >> 11) * INV_2_53) < fer
                        etype = 3 if err else 1
                    else:
                        etype = 2
                    reset = (baseline_mode and ntx == 1
                             and not (error_feedback and err))
                    for st in range(n):
                        if counter[st] == 0:
                            i = stage[st]
                            ns = 0 if reset else (i + 1 if i < m else 0)
                            stage[st] = ns
                            x = _rotl(s1 * 5ULL, 7) * 9ULL
                            t = s1 << 17
                            s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t
                            s3 = _rotl(s3, 45)
                            counter[st] = <int64_t> (x % (<uint64_t> win[ns]))

                if epoch >= warmup:
                    if etype == 0:
                        n_idle += 1
                    elif etype == 1:
                        n_succ += 1
                    elif etype == 2:
                        n_coll += 1
                    else:
                        n_err += 1
                    attempts += ntx
                    if ntx >= 2:
                        coll_attempts += ntx
    finally:
        free(win)
        free(stage)
        free(counter)

    return attempts, coll_attempts, n_idle, n_succ, n_coll, n_err

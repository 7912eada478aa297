# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernels: Philox4x32-10 plus the three trial loops.

Mirror of guesswho._kernel.pure with the same draw discipline and the same
floating-point expressions, so counts match the pure backend bit for bit.
Strategy dispatch is by the small integer ids from guesswho.strategies.
"""

from libc.stdint cimport int64_t, uint32_t, uint64_t

BACKEND = "compiled"

DEF INV_TWO53 = 1.0 / 9007199254740992.0  # 2^-53


cdef struct Stream:
    uint32_t k0
    uint32_t k1
    uint32_t t_lo
    uint32_t t_hi
    uint32_t domain
    uint32_t block
    double pending
    bint has_pending


cdef inline void _philox_block(uint32_t c0, uint32_t c1, uint32_t c2, uint32_t c3,
                               uint32_t k0, uint32_t k1, uint32_t* out) nogil:
    cdef int r
    cdef uint64_t p0, p1
    for r in range(10):
        p0 = (<uint64_t>0xD2511F53u) * c0
        p1 = (<uint64_t>0xCD9E8D57u) * c2
        c0 = (<uint32_t>(p1 >> 32)) ^ c1 ^ k0
        c1 = <uint32_t>p1
        c2 = (<uint32_t>(p0 >> 32)) ^ c3 ^ k1
        c3 = <uint32_t>p0
        k0 = k0 + <uint32_t>0x9E3779B9u
        k1 = k1 + <uint32_t>0xBB67AE85u
    out[0] = c0
    out[1] = c1
    out[2] = c2
    out[3] = c3


cdef inline void _init_stream(Stream* s, uint64_t seed, uint64_t trial, uint32_t domain) nogil:
    s.k0 = <uint32_t>seed
    s.k1 = <uint32_t>(seed >> 32)
    s.t_lo = <uint32_t>trial
    s.t_hi = <uint32_t>(trial >> 32)
    s.domain = domain
    s.block = 0
    s.pending = 0.0
    s.has_pending = False


cdef inline double _next_uniform(Stream* s) nogil:
    cdef uint32_t out[4]
    cdef uint64_t packed
    if s.has_pending:
        s.has_pending = False
        return s.pending
    _philox_block(s.block, s.t_lo, s.t_hi, s.domain, s.k0, s.k1, out)
    s.block += 1
    packed = ((<uint64_t>out[3]) << 32) | out[2]
    s.pending = <double>(packed >> 11) * INV_TWO53
    s.has_pending = True
    packed = ((<uint64_t>out[1]) << 32) | out[0]
    return <double>(packed >> 11) * INV_TWO53


def philox_block(counter, key):
    """Python-visible single block, for cross-checking against the pure RNG."""
    cdef uint32_t out[4]
    _philox_block(counter[0], counter[1], counter[2], counter[3], key[0], key[1], out)
    return out[0], out[1], out[2], out[3]


cdef inline int _floor_log2(int64_t v) nogil:
    cdef int k = -1
    while v > 0:
        v >>= 1
        k += 1
    return k


cdef inline int64_t _bid_for(int sid, int64_t n, int64_t m, Stream* s) nogil:
    cdef int64_t weeds_bid
    if sid == 0:  # optimal: weeds bid when strictly past the opponent's box
        weeds_bid = (<int64_t>1) << _floor_log2(m - 1)
        if n > 2 * weeds_bid:
            return weeds_bid
        return n >> 1
    elif sid == 1:  # halving
        return n >> 1
    elif sid == 2:  # bold, clamped legal
        weeds_bid = (<int64_t>1) << _floor_log2(m - 1)
        if weeds_bid > n - 1:
            return n - 1
        return weeds_bid
    elif sid == 3:  # always-one
        return 1
    else:  # uniform-random; same expression as the pure rule
        return 1 + <int64_t>(_next_uniform(s) * <double>(n - 1))


def discrete_batch(seed, trial_lo, trial_hi, n, m, sid_a, sid_b):
    """Trials [trial_lo, trial_hi); returns (player-0 wins, max rounds seen)."""
    cdef uint64_t c_seed = seed
    cdef uint64_t lo = trial_lo
    cdef uint64_t hi = trial_hi
    cdef uint64_t t
    cdef int64_t n0 = n, m0 = m
    cdef int sa = sid_a, sb = sid_b
    cdef int64_t pools[2]
    cdef int64_t wins = 0, max_rounds = 0, rounds, bid, p, new_pool
    cdef int mover, winner, bad_bid = 0
    cdef double u
    cdef Stream s
    with nogil:
        for t in range(lo, hi):
            _init_stream(&s, c_seed, t, 0)
            pools[0] = n0
            pools[1] = m0
            mover = 0
            rounds = 0
            winner = -1
            while winner < 0:
                p = pools[mover]
                bid = _bid_for(sa if mover == 0 else sb, p, pools[1 - mover], &s)
                if bid < 1 or bid > p - 1:
                    bad_bid = 1
                    break
                u = _next_uniform(&s)
                new_pool = bid if u * <double>p < <double>bid else p - bid
                pools[mover] = new_pool
                rounds += 1
                if new_pool == 1:
                    winner = mover
                else:
                    mover = 1 - mover
            if bad_bid:
                break
            if winner == 0:
                wins += 1
            if rounds > max_rounds:
                max_rounds = rounds
    if bad_bid:
        raise ValueError("strategy produced an out-of-range bid")
    return wins, max_rounds


def continuous_batch(seed, trial_lo, trial_hi, in_weeds, alpha, beta, epsilon, horizon):
    """Scale-free continuous trials; returns (p0 wins, p0 losses, undecided)."""
    cdef uint64_t c_seed = seed
    cdef uint64_t lo = trial_lo
    cdef uint64_t hi = trial_hi
    cdef uint64_t t
    cdef bint weeds0 = in_weeds, weeds
    cdef double a0 = alpha, b0 = beta, a, b, swap
    cdef double eps = epsilon
    cdef int64_t cap = horizon, turn
    cdef int64_t wins = 0, losses = 0, undecided = 0
    cdef int mover, decided
    cdef Stream s
    with nogil:
        for t in range(lo, hi):
            _init_stream(&s, c_seed, t, 1)
            weeds = weeds0
            a = a0
            b = b0
            mover = 0
            decided = 0
            for turn in range(cap):
                if weeds:
                    if 2.0 / a < eps:
                        if mover == 0:
                            losses += 1
                        else:
                            wins += 1
                        decided = 1
                        break
                    if _next_uniform(&s) * a < 1.0:
                        a = 2.0 * b
                        b = 2.0
                    else:
                        weeds = False
                        swap = b
                        b = a - 1.0
                        a = swap
                else:
                    weeds = True
                    swap = a
                    a = 2.0 * b
                    b = swap
                mover = 1 - mover
            if not decided:
                undecided += 1
    return wins, losses, undecided


def escape_batch(seed, trial_lo, trial_hi, alpha, epsilon, max_attempts):
    """Returns (escape count, undecided) for the trapped player's chain."""
    cdef uint64_t c_seed = seed
    cdef uint64_t lo = trial_lo
    cdef uint64_t hi = trial_hi
    cdef uint64_t t
    cdef double a0 = alpha, a
    cdef double eps = epsilon
    cdef int64_t cap = max_attempts, attempt
    cdef int64_t escapes = 0, undecided = 0
    cdef int settled
    cdef Stream s
    with nogil:
        for t in range(lo, hi):
            _init_stream(&s, c_seed, t, 2)
            a = a0
            settled = 0
            for attempt in range(cap):
                if 2.0 / a < eps:
                    settled = 1
                    break
                if _next_uniform(&s) * a < 1.0:
                    escapes += 1
                    settled = 1
                    break
                a = 2.0 * (a - 1.0)
            if not settled:
                undecided += 1
    return escapes, undecided

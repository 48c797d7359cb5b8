"""Pure-Python simulation kernel.

Same algorithm, draw order and RNG (splitmix64-seeded xoshiro256**) as
the compiled kernel in ``_sim_core.pyx``, so both backends produce
bit-identical results for the same stream seed. Used when the extension
is not built.
"""

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def splitmix64(z: int) -> int:
    """splitmix64 finalizer; also the seed-splitting mix function."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def xoshiro_state(seed: int) -> list[int]:
    """Expand a 64-bit seed into a xoshiro256** state."""
    state = []
    z = seed & MASK64
    for _ in range(4):
        z = (z + GAMMA) & MASK64
        state.append(splitmix64(z))
    if not any(state):
        state[0] = GAMMA
    return state


def run_epochs(n, windows, m, baseline_mode, error_feedback, fer,
               slots, warmup, seed):
    """Advance ``n`` saturated stations through ``slots`` channel epochs.

    Per epoch: stations whose counter is 0 transmit; with no transmitter
    the epoch is idle and every counter decrements; with one transmitter
    a Bernoulli(fer) draw picks data error versus success; with more it
    is a collision. Non-transmitting stations freeze during busy epochs.
    Transmitters then redraw a counter uniformly in the next stage's
    window (stage advance per mode, wrapping to 0 past stage ``m``).

    Returns measured-epoch counters:
    ``(attempts, colliding_attempts, idle, success, collision, error)``.
    """
    # xoshiro256** inlined for speed; the RNG stream must match _sim_core
    # draw for draw.
    s0, s1, s2, s3 = xoshiro_state(seed)

    stage = [0] * n
    counter = [0] * n
    for st in range(n):
        x = (s1 * 5) & MASK64
        x = (((x << 7) | (x >> 57)) & MASK64) * 9 & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & MASK64
        counter[st] = x % windows[0]

    attempts = 0
    coll_attempts = 0
    n_idle = n_succ = n_coll = n_err = 0

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
                x = (s1 * 5) & MASK64
                x = (((x << 7) | (x >> 57)) & MASK64) * 9 & MASK64
                t = (s1 << 17) & MASK64
                s2 ^= s0
                s3 ^= s1
                s1 ^= s2
                s0 ^= s3
                s2 ^= t
                s3 = ((s3 << 45) | (s3 >> 19)) & MASK64
                err = (x >> 11) * _INV_2_53 < fer
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
                    x = (s1 * 5) & MASK64
                    x = (((x << 7) | (x >> 57)) & MASK64) * 9 & MASK64
                    t = (s1 << 17) & MASK64
                    s2 ^= s0
                    s3 ^= s1
                    s1 ^= s2
                    s0 ^= s3
                    s2 ^= t
                    s3 = ((s3 << 45) | (s3 >> 19)) & MASK64
                    counter[st] = x % windows[ns]

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

    return attempts, coll_attempts, n_idle, n_succ, n_coll, n_err

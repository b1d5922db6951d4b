"""Counter-based normal variates (Philox4x32-10).

Every Monte Carlo trajectory owns the stream keyed by ``master_seed`` and
addressed by ``(trajectory index, step pair)``.  A variate depends only on
those three numbers, so splitting the ensemble across workers in any way
reproduces serial results bit for bit.
"""
import numba
import numpy as np

_MASK = np.uint64(0xFFFFFFFF)
_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_S32 = np.uint64(32)
_S11 = np.uint64(11)


@numba.njit(cache=True, inline="always")
def philox4x32(c0, c1, c2, c3, k0, k1):
    """Ten Philox rounds; all arguments and results are uint64 holding 32-bit words."""
    for _ in range(10):
        p0 = _M0 * c0
        p1 = _M1 * c2
        hi0 = p0 >> _S32
        lo0 = p0 & _MASK
        hi1 = p1 >> _S32
        lo1 = p1 & _MASK
        c0 = hi1 ^ c1 ^ k0
        c1 = lo1
        c2 = hi0 ^ c3 ^ k1
        c3 = lo0
        k0 = (k0 + _W0) & _MASK
        k1 = (k1 + _W1) & _MASK
    return c0, c1, c2, c3


@numba.njit(cache=True, inline="always")
def normal_pair(seed, stream, counter):
    """Two independent N(0, 1) variates for ``(seed, stream, counter)`` via Box-Muller."""
    seed = np.uint64(seed)
    stream = np.uint64(stream)
    counter = np.uint64(counter)
    x0, x1, x2, x3 = philox4x32(
        counter & _MASK, counter >> _S32, stream & _MASK, stream >> _S32, seed & _MASK, seed >> _S32
    )
    # 53-bit uniforms; u1 lies in (0, 1] so the log is finite
    a = ((x0 << _S32) | x1) >> _S11
    b = ((x2 << _S32) | x3) >> _S11
    u1 = (np.float64(a) + 1.0) * (1.0 / 9007199254740992.0)
    u2 = np.float64(b) * (1.0 / 9007199254740992.0)
    r = np.sqrt(-2.0 * np.log(u1))
    return r * np.cos(2.0 * np.pi * u2), r * np.sin(2.0 * np.pi * u2)


@numba.njit(cache=True)
def _philox_block(counters, key):
    out = np.empty_like(counters)
    for r in range(counters.shape[0]):
        c = counters[r]
        out[r, 0], out[r, 1], out[r, 2], out[r, 3] = philox4x32(
            c[0], c[1], c[2], c[3], key[0], key[1]
        )
    return out


def philox(counter, key) -> tuple[int, ...]:
    """Philox4x32-10 of one 4-word counter under a 2-word key (for checks against reference vectors)."""
    c = np.asarray([counter], dtype=np.uint64)
    k = np.asarray(key, dtype=np.uint64)
    return tuple(int(x) for x in _philox_block(c, k)[0])


@numba.njit(cache=True)
def _normals(seed, stream, n):
    out = np.empty(n)
    for k in range((n + 1) // 2):
        z0, z1 = normal_pair(seed, stream, k)
        out[2 * k] = z0
        if 2 * k + 1 < n:
            out[2 * k + 1] = z1
    return out


def normals(seed: int, stream: int, n: int) -> np.ndarray:
    """First ``n`` variates of one stream; entry ``k`` is the noise of step ``k``."""
    return _normals(np.uint64(seed), np.uint64(stream), n)
